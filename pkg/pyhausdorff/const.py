"""Constants for pyhausdorff."""

METRIC_L2 = "l2"
METRIC_L1 = "l1"
METRIC_LINF = "linf"

METRIC_KINDS = (METRIC_L2, METRIC_L1, METRIC_LINF)

TREE_A = "A"
TREE_B = "B"

DEFAULT_ALPHA = 2.0
DEFAULT_EPS = 0.1
DEFAULT_METRIC = METRIC_L2

TREE_FORMAT_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INCOMPATIBLE = 3
EXIT_INVARIANT = 4

# Brute-force packing checks are quadratic per traversal prefix.
PACKING_CHECK_LIMIT = 256
