"""Coded distributed matrix multiplication over Galois rings with RMFE packing."""

from .batch import BatchSession, batch_multiply
from .cluster import Cluster, gather, simulate
from .ep import (
    EpParams,
    WorkerResponse,
    WorkerTask,
    assemble,
    decode,
    encode,
    partition,
    preset,
    recovery_threshold,
    worker_multiply,
)
from .errors import *  # noqa: F403
from .experiment import ExperimentConfig, pad_and_multiply, run_experiment
from .matfile import read_matrix, write_matrix
from .metrics import Metrics, amortized_report
from .poly import Poly, eval_many, interpolate, poly_mul, product_tree
from .ring import (
    ExceptionalSet,
    ExtensionRing,
    GaloisRing,
    RingElement,
    all_elements,
    coeff_view,
    element,
    embed,
    exceptional_set,
    inverse,
    is_unit,
    make_extension,
    make_ring,
    ring_arithmetic,
    tower,
)
from .rmfe import (
    INFINITY,
    ConcatenatedRmfe,
    RmfeScheme,
    build_rmfe,
    concatenate,
    phi,
    phi_matrix,
    psi,
    psi_matrix,
)
from .single import (
    SingleConfig,
    cost_profile,
    multiply,
    plain_ep,
    single_multiply_I,
    single_multiply_II,
)

__version__ = "0.1.0"
