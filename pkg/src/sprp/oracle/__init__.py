from .exhaustive import EXHAUSTIVE_CAP, ExhaustiveResult, model_exhaustive
from .scattered import SCATTERED_CAP, covering_sets, scattered_bruteforce
from .steiner import (HELD_KARP_CAP, OracleSizeError, WarehouseGraph, depot_node, instance_graph,
                      multidepot_oracle, required_nodes, standard_oracle, steiner_tsp_closed,
                      steiner_tsp_open)
