from .builders import (BUILDERS, build_decoupling, build_model, build_multidepot, build_scattered,
                       build_standard, standard_size)
from .varmap import SYMBOLS, VarMap, var_name
from .walk import AloneTrip, PickerWalk, WalkError, check_walk, reconstruct_walk, walk_from_dp
