"""MDS array codes with optimal rebuilding access.

Two constructions over small finite fields: a zigzag code whose systematic
nodes rebuild from 1/r of the surviving data, and a code in which every
node, parities included, rebuilds from 1/r.
"""

from .code_c1 import C1Code, C1Params
from .code_c2 import C2Code, C2Params
from .decoder import decode_erasures, search_coefficients, subblock_criterion, verify_mds
from .factory import make_code
from .galois import FieldSpec
from .plan import AccessReport, RebuildPlan

__all__ = [
    "AccessReport",
    "C1Code",
    "C1Params",
    "C2Code",
    "C2Params",
    "FieldSpec",
    "RebuildPlan",
    "decode_erasures",
    "make_code",
    "search_coefficients",
    "subblock_criterion",
    "verify_mds",
]

__version__ = "0.1.0"
