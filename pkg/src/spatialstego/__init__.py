"""Steganographic packet transport that hides torn, framed ciphertext in
the variable columns of aligned carrier DNA sequences."""

from .alignment import ScoringScheme, needleman_wunsch, star_msa, variable_columns
from .codec import CryptoMap, SigmaMap
from .fragmentation import TearPlan
from .pipeline import SessionConfig, StegoEnvelope, receiver_decode, sender_encode

__all__ = [
    "CryptoMap",
    "ScoringScheme",
    "SessionConfig",
    "SigmaMap",
    "StegoEnvelope",
    "TearPlan",
    "needleman_wunsch",
    "receiver_decode",
    "sender_encode",
    "star_msa",
    "variable_columns",
]
