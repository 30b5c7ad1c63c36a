from .bb import solve_bb
from .enumerate import enumerate_feasible, enumerate_optimum, free_after_propagation
from .lpformat import export_lp, parse_lp, read_solution, write_solution, SolutionFormatError
from .model import (BINARY, EQ, GE, INFEASIBLE, INTEGER, LE, NODE_LIMIT, OPTIMAL, TIME_LIMIT,
                    MipModel, MipSolution, ModelError, evaluate, fix_variables)
