from cornershuffle.perm.moves import LR
from cornershuffle.perm.moves import UL
from cornershuffle.perm.moves import Corner
from cornershuffle.perm.moves import CornerMove
from cornershuffle.perm.moves import code_move
from cornershuffle.perm.moves import corner_move_perm
from cornershuffle.perm.moves import move_code
from cornershuffle.perm.moves import ul_sign
from cornershuffle.perm.perm import TOP
from cornershuffle.perm.perm import Perm
from cornershuffle.perm.perm import Position
from cornershuffle.perm.perm import all_positions
from cornershuffle.perm.perm import compose
from cornershuffle.perm.perm import compose_all
from cornershuffle.perm.perm import cycle_type
from cornershuffle.perm.perm import cycles_of
from cornershuffle.perm.perm import index_position
from cornershuffle.perm.perm import inverse
from cornershuffle.perm.perm import is_three_cycle
from cornershuffle.perm.perm import position_index
from cornershuffle.perm.perm import sign
from cornershuffle.perm.perm import three_cycle
from cornershuffle.perm.perm import three_cycle_cells
