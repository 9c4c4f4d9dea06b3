"""Command-line front end.

Exit codes: 0 success, 2 MAC failure, 3 structural/format failure,
4 capacity/configuration failure.
"""

from __future__ import annotations

import argparse
import os
import random
import secrets
import sys
from pathlib import Path

from . import netsim
from .alignment import DEFAULT_SCORING
from .codec import CryptoMap, SigmaMap
from .errors import ConfigError, MacFailure, SpatialError
from .files import load_channels, load_session, read_carriers, write_session
from .fragmentation import TearPlan
from .pipeline import SessionConfig, inspect_envelope, prepare, receiver_decode, sender_encode

EXIT_OK = 0
EXIT_MAC = 2
EXIT_STRUCTURE = 3
EXIT_CONFIG = 4

ENVELOPE_SUFFIX = ".spkt"


def _err(msg: str) -> None:
    print(f"error: {msg}", file=sys.stderr)


def _resolve_seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(64)
    return args.seed


def _need_session(args) -> SessionConfig:
    if not args.session:
        raise ConfigError("--session is required")
    return load_session(args.session)


def _plan(args, cfg: SessionConfig) -> TearPlan:
    if args.plan:
        return TearPlan.parse(args.plan)
    return TearPlan.random(cfg.total_message_bits // 2, cfg.n_packets, random.Random(args.seed))


def cmd_keygen(args) -> int:
    carriers = tuple(seq for _, seq in read_carriers(args.carriers))
    if args.seed is not None:
        key = random.Random(args.seed).randbytes(32)
    else:
        key = secrets.token_bytes(32)
    cfg = SessionConfig(
        mac_key=key,
        carriers=carriers,
        n_packets=args.n_packets,
        total_message_bits=args.total_bits,
        sigma=SigmaMap("ACGT"),
        crypto=CryptoMap.complement(),
        scoring=DEFAULT_SCORING,
        template_policy=args.template_policy,
    )
    out = Path(args.out)
    carriers_ref = os.path.relpath(Path(args.carriers).resolve(), out.resolve().parent)
    write_session(out, cfg, carriers_ref)
    print(f"wrote session {out} (N={cfg.n_packets}, {cfg.total_message_bits} bits)")
    return EXIT_OK


def cmd_encode(args) -> int:
    cfg = _need_session(args)
    seed = _resolve_seed(args)
    plaintext = Path(args.plaintext).read_bytes()
    if not plaintext:
        raise ConfigError("plaintext is empty")
    plan = _plan(args, cfg)
    trace = prepare(plaintext, cfg, plan)
    vps = cfg.positions()

    print(f"seed {seed}  plan {plan.to_json()}")
    print("capacity report:")
    for k, vp in enumerate(vps):
        print(f"  carrier {k}: {len(cfg.carriers[k])} nt, {vp.capacity} variable positions")
    for k, (stream, t) in enumerate(zip(trace.streams, trace.templates)):
        mark = "ok" if len(stream) <= vps[t].capacity else "OVER"
        print(f"  packet {k}: {len(stream)} nt framed -> carrier {t} ({mark})")

    envelopes = sender_encode(plaintext, cfg, plan, seed)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for env in envelopes:
        (out_dir / f"{env.seq_bits}{ENVELOPE_SUFFIX}").write_bytes(netsim.serialize(env))
    print(f"wrote {len(envelopes)} envelopes to {out_dir}")
    return EXIT_OK


def cmd_decode(args) -> int:
    cfg = _need_session(args)
    envelopes = []
    origin = {}
    for name in args.envelopes:
        try:
            env = netsim.parse(Path(name).read_bytes())
        except SpatialError as exc:
            _err(f"{name}: {exc}")
            return exc.exit_code
        envelopes.append(env)
        origin.setdefault(env.seq_bits, name)
    try:
        plaintext = receiver_decode(envelopes, cfg)
    except MacFailure as exc:
        _err(f"MAC failure in {origin.get(exc.seq_bits, '?')} (packet {exc.seq_bits})")
        return EXIT_MAC
    if args.out:
        Path(args.out).write_bytes(plaintext)
    else:
        sys.stdout.buffer.write(plaintext + b"\n")
        sys.stdout.flush()
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _need_session(args)
    seed = _resolve_seed(args)
    plaintext = Path(args.plaintext).read_bytes()
    channels = load_channels(args.channels)
    envelopes = sender_encode(plaintext, cfg, _plan(args, cfg), seed)
    report = netsim.run_transfer(
        envelopes, channels, cfg, timeout_ms=args.timeout_ms, send_interval_ms=args.send_interval_ms
    )
    for line in report.result.log_lines():
        print(line)
    print(f"accepted: {' '.join(sorted(report.accepted)) or '-'}")
    print(f"rejected (MAC): {' '.join(report.rejected) or '-'}")
    print(f"duplicates: {' '.join(report.duplicates) or '-'}")
    if report.ok:
        print("result: OK")
        print(f"plaintext: {report.plaintext.decode('utf-8', errors='replace')}")
        return EXIT_OK
    print(f"result: FAILED ({type(report.error).__name__}: {report.error})")
    return report.error.exit_code


def cmd_inspect(args) -> int:
    cfg = _need_session(args)
    env = netsim.parse(Path(args.envelope).read_bytes())
    r = inspect_envelope(env, cfg)
    print(f"seq_bits: {r.seq_bits}")
    print(f"template: {r.template}")
    print(f"header:   {r.header}")
    print(f"size:     {r.size}")
    print(f"payload:  {r.payload}")
    print(f"trailer:  {r.trailer}")
    print(f"path:     {list(r.path)}")
    print(f"filler:   {len(r.filler)} nt")
    print(f"MAC: {'OK' if r.mac_ok else 'FAILED'}")
    return EXIT_OK if r.mac_ok else EXIT_MAC


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="RNG seed (u64)")
    common.add_argument("--session", default=argparse.SUPPRESS, help="session file")

    parser = argparse.ArgumentParser(prog="spatialstego", description=__doc__.splitlines()[0],
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("keygen", parents=[common], help="write a fresh session file")
    p.add_argument("--out", required=True)
    p.add_argument("--n-packets", type=int, required=True)
    p.add_argument("--total-bits", type=int, required=True)
    p.add_argument("--carriers", required=True, help="FASTA file with 2-3 carriers")
    p.add_argument("--template-policy", default="round_robin")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encode", parents=[common], help="encode a plaintext file into envelopes")
    p.add_argument("plaintext")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--plan", help="tear plan as nested JSON list, e.g. [23,[8,[9,32]]]")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="decode envelope files")
    p.add_argument("envelopes", nargs="+")
    p.add_argument("--out")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", parents=[common], help="encode, simulate transport, decode")
    p.add_argument("plaintext")
    p.add_argument("--channels", required=True)
    p.add_argument("--plan")
    p.add_argument("--timeout-ms", type=int)
    p.add_argument("--send-interval-ms", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("inspect", parents=[common], help="dump one envelope")
    p.add_argument("envelope")
    p.set_defaults(func=cmd_inspect)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    args.seed = getattr(args, "seed", None)
    args.session = getattr(args, "session", None)
    try:
        return args.func(args)
    except MacFailure as exc:
        _err(str(exc))
        return EXIT_MAC
    except SpatialError as exc:
        _err(f"{type(exc).__name__}: {exc}")
        return exc.exit_code
    except OSError as exc:
        _err(str(exc))
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
