"""This module contains constants used in the secure AUC framework.
"""

from typing import List, Dict

# bit length of the ring elements
ELL: int = 64

# ring moduli: Z_L, Z_K and the small prime field for the bit shares of private compare
L: int = 2**64
K: int = 2**63
P: int = 67
MODULI: List[int] = [L, K, P]

# version of the wire format and hello message, kept in sync with version.txt
VERSION: str = "0.1.0"

# default fixed-point scale, four decimal places
DEFAULT_SCALE: int = 10**4

# party roles
S0: str = "s0"
S1: str = "s1"
S2: str = "s2"
OWNER: str = "owner"
PROXIES: List[str] = [S0, S1]
SERVERS: List[str] = [S0, S1, S2]
ROLES: List[str] = [OWNER, S0, S1, S2]

# metric names, also the engine selector of the cli
AUROC: str = "auroc"
AUROC_TIE: str = "auroc-tie"
AUPR: str = "aupr"
METRICS: List[str] = [AUROC, AUROC_TIE, AUPR]

# x-axis of the aupr engine
RECALL: str = "recall"
RANK: str = "rank"
RECALL_AXES: List[str] = [RECALL, RANK]

# protocol tags
MUL: str = "mul"
PC: str = "pc"
MUX: str = "mux"
MC: str = "mc"
CMP: str = "cmp"
DIV: str = "div"
TIES: str = "ties"
OPEN: str = "open"
# session tags
CONTROL: str = "control"
CLOSE: str = "close"
SEED: str = "seed"
HELLO: str = "hello"
SHARES: str = "shares"
RESULT: str = "result"

# wire ids of the tags, one byte each
TAG_IDS: Dict[str, int] = {
    MUL: 1,
    PC: 2,
    MUX: 3,
    MC: 4,
    CMP: 5,
    DIV: 6,
    TIES: 7,
    OPEN: 8,
    CONTROL: 16,
    CLOSE: 17,
    SEED: 18,
    HELLO: 19,
    SHARES: 20,
    RESULT: 21,
}
TAG_NAMES: Dict[int, str] = {tag_id: name for name, tag_id in TAG_IDS.items()}

# protocols, which need the helper party S2
HELPER_TAGS: List[str] = [MUL, PC, MUX, MC, CMP, DIV, TIES]

# Closed-form communication in bits per element and invocation, summed over all
# parties. Used for reports only, framing overhead is not included.
REFERENCE_COMMUNICATION_BITS: Dict[str, int] = {
    MUX: 6 * ELL,
    MC: 4 * ELL * 7 + 6 * ELL,
    CMP: 4 * ELL * 7 + 11 * ELL,
    DIV: 6 * ELL,
}

# names of the session matrix parameters, see coverage.py
METRIC: str = "metric"
DELTA: str = "delta"
OWNERS: str = "owners"
TIED: str = "tied"
SAMPLES: str = "samples"

# param_map maps the name of a session matrix parameter to its position in a row
param_map: Dict[str, int] = {}

# scalability experiments, the other names are the session matrix parameters
UNBALANCED: str = "unbalanced"
EXPERIMENTS: List[str] = [SAMPLES, OWNERS, DELTA, UNBALANCED]

# sweeps of the synthetic scalability experiments, see experiments.py
SAMPLES_SWEEP: List[int] = [64, 125, 250, 500, 1000]
SAMPLES_SWEEP_OWNERS: int = 16
OWNERS_SWEEP: List[int] = [2, 4, 8, 16]
OWNERS_SWEEP_SAMPLES: int = 1000
DELTA_SWEEP: List[int] = [1, 3, 5, 11, 25, 51, 101]
DELTA_SWEEP_OWNERS: int = 8
DELTA_SWEEP_SAMPLES: int = 1000
# samples per owner of the unbalanced setting
UNBALANCED_SIZES: List[int] = [12, 18, 32, 58, 107, 258, 507, 1008]

# sample counts and repetitions of the AUC stability study
STABILITY_SIZES: List[int] = [5, 10, 20, 40, 80, 160]
STABILITY_REPETITIONS: int = 1000

# accepted absolute difference to the oracle at scale F, the precision of aupr is
# floored per record
TOLERANCE: Dict[str, int] = {AUROC: 0, AUROC_TIE: 1, AUPR: 10}
