from .validation import (check_graph, check_n_supernodes, check_partition,
                         check_rng, check_single_relation)

__all__ = ["check_graph", "check_n_supernodes", "check_partition", "check_rng",
           "check_single_relation"]
