import random

import pytest

from spatialstego.alignment import (
    MsaResult,
    _star_msa,
    ScoringScheme,
    carrier_positions,
    needleman_wunsch,
    star_msa,
    variable_columns,
)
from spatialstego.errors import ConfigError, TooFewCarriers, TooManyCarriers
from spatialstego.files import fixture_carriers

from oracles import brute_force_best, column_score, preferred_optimal_alignment


def test_trivial_alignments():
    assert needleman_wunsch("A", "A") == ("A", "A", 1)
    assert needleman_wunsch("A", "") == ("A", "-", -2)
    assert needleman_wunsch("", "A") == ("-", "A", -2)
    assert needleman_wunsch("", "") == ("", "", 0)


def test_gatt_gcat_matches_brute_force():
    result = needleman_wunsch("GATT", "GCAT")
    assert result.score == brute_force_best("GATT", "GCAT")
    assert column_score(result.row_a, result.row_b) == result.score


def test_tie_break_prefers_diagonal_then_gap_in_b():
    # AA/-A and AA/A- both score -1; the diagonal is taken at the end
    assert needleman_wunsch("AA", "A") == ("AA", "-A", -1)


def test_traceback_matches_priority_oracle():
    rng = random.Random(21)
    for _ in range(300):
        a = "".join(rng.choice("AC") for _ in range(rng.randint(0, 5)))
        b = "".join(rng.choice("AC") for _ in range(rng.randint(0, 5)))
        assert tuple(needleman_wunsch(a, b)) == preferred_optimal_alignment(a, b)


def test_dp_optimal_on_random_pairs():
    rng = random.Random(11)
    scheme = ScoringScheme(2, -1, -3)
    for _ in range(200):
        a = "".join(rng.choice("ACGT") for _ in range(rng.randint(0, 6)))
        b = "".join(rng.choice("ACGT") for _ in range(rng.randint(0, 6)))
        r = needleman_wunsch(a, b, scheme)
        assert r.score == brute_force_best(a, b, 2, -1, -3)
        assert column_score(r.row_a, r.row_b, 2, -1, -3) == r.score
        assert r.row_a.replace("-", "") == a
        assert r.row_b.replace("-", "") == b


def test_scoring_invariants():
    with pytest.raises(ConfigError):
        ScoringScheme(1, 1, -2)
    with pytest.raises(ConfigError):
        ScoringScheme(1, -1, 0)


def test_star_msa_identical_triple():
    x = "ACGTTGCA"
    assert star_msa([x, x, x]).rows == (x, x, x)
    assert variable_columns(star_msa([x, x, x]), 0).positions == ()


def test_star_msa_two_carriers_is_pairwise():
    r = needleman_wunsch("ACGTAC", "AGTTAC")
    assert star_msa(["ACGTAC", "AGTTAC"]).rows == (r.row_a, r.row_b)


def test_star_msa_hand_merge():
    # pairwise scores: 1, 1, 1 -> tie, centre is carrier 0 (ACGT)
    assert [brute_force_best(*p) for p in [("ACGT", "AGT"), ("ACGT", "ACT"), ("AGT", "ACT")]] == [1, 1, 1]
    m = star_msa(["ACGT", "AGT", "ACT"])
    assert m.rows == ("ACGT", "A-GT", "AC-T")
    assert m.column_count == 4
    assert variable_columns(m, 0).positions == (1, 2)


def test_star_msa_merge_inserts_centre_gaps():
    # centre AAGG (scores 2+2); its alignments AA-GG/AACGG and AAGG-/AAGGT
    assert brute_force_best("AAGG", "AACGG") == 2
    assert brute_force_best("AAGG", "AAGGT") == 2
    assert brute_force_best("AACGG", "AAGGT") == 1
    m = star_msa(["AAGG", "AACGG", "AAGGT"])
    assert m.rows == ("AA-GG-", "AACGG-", "AA-GGT")
    assert variable_columns(m, 0).positions == ()
    assert variable_columns(m, 1).positions == (2,)
    assert variable_columns(m, 2).positions == (4,)


def test_star_msa_centre_not_first():
    m = star_msa(["AACGG", "AAGG", "AAGGT"])
    assert m.rows == ("AACGG-", "AA-GG-", "AA-GGT")


def test_star_msa_carrier_count():
    with pytest.raises(TooFewCarriers):
        star_msa(["ACGT"])
    with pytest.raises(TooManyCarriers):
        star_msa(["A", "C", "G", "T"])


def test_variable_columns_examples():
    m = MsaResult(("AC-G", "ACTG"))
    assert variable_columns(m, 1).positions == (2,)
    assert variable_columns(m, 0).positions == ()
    m = MsaResult(("AAAA", "AAAT", "AAAC"))
    vp = variable_columns(m, 0)
    assert vp.positions == (3,)
    assert vp.template_length == 4


def _random_family(rng, length=60):
    base = [rng.choice("ACGT") for _ in range(length)]
    out = []
    for _ in range(3):
        seq = list(base)
        for _ in range(rng.randint(0, 6)):
            op = rng.random()
            i = rng.randrange(len(seq))
            if op < 0.6:
                seq[i] = rng.choice("ACGT")
            elif op < 0.8:
                del seq[i]
            else:
                seq.insert(i, rng.choice("ACGT"))
        out.append("".join(seq))
    return out


def test_msa_properties_random():
    rng = random.Random(5)
    for _ in range(40):
        carriers = _random_family(rng)
        m = star_msa(carriers)
        for k, c in enumerate(carriers):
            assert m.ungapped(k) == c
            vp = variable_columns(m, k)
            assert list(vp.positions) == sorted(set(vp.positions))
            assert all(0 <= p < len(c) for p in vp.positions)
        # no all-gap columns
        assert all(any(row[i] != "-" for row in m.rows) for i in range(m.column_count))


def test_msa_projection_keeps_pairwise_alignments():
    rng = random.Random(8)
    for _ in range(30):
        carriers = _random_family(rng, 40)
        m = star_msa(carriers)
        scores = {}
        for x in range(3):
            for y in range(3):
                if x != y:
                    scores[x, y] = needleman_wunsch(carriers[x], carriers[y]).score
        centre = max(range(3), key=lambda c: (sum(scores[c, o] for o in range(3) if o != c), -c))
        for other in range(3):
            if other == centre:
                continue
            cols = [(a, b) for a, b in zip(m.rows[centre], m.rows[other]) if (a, b) != ("-", "-")]
            proj_c = "".join(a for a, _ in cols)
            proj_o = "".join(b for _, b in cols)
            expected = needleman_wunsch(carriers[centre], carriers[other]) if centre < other else None
            if expected is not None:
                assert (proj_c, proj_o) == (expected.row_a, expected.row_b)
            assert column_score(proj_c, proj_o) == scores[centre, other]


def test_fixture_positions_deterministic():
    carriers = fixture_carriers()
    first = [vp.positions for vp in carrier_positions(carriers)]
    _star_msa.cache_clear()
    second = [variable_columns(star_msa(list(carriers)), k).positions for k in range(3)]
    assert first == second
    assert all(len(p) >= 40 for p in first)
