from cornershuffle.comparison.constant import EXHAUSTIVE_MAX_N
from cornershuffle.comparison.constant import ComparisonReport
from cornershuffle.comparison.constant import comparison_check
from cornershuffle.comparison.constant import comparison_constant
from cornershuffle.comparison.constant import verify_decompositions
from cornershuffle.comparison.decompose import STRATEGIES
from cornershuffle.comparison.decompose import classify
from cornershuffle.comparison.decompose import decompose_cells
from cornershuffle.comparison.decompose import decompose_three_cycle
from cornershuffle.comparison.decompose import helper_pair
from cornershuffle.comparison.decompose import shortest_words
from cornershuffle.comparison.decompose import three_cycles
from cornershuffle.comparison.words import MoveWord
from cornershuffle.comparison.words import build_W
from cornershuffle.comparison.words import build_X
from cornershuffle.comparison.words import build_Y
from cornershuffle.comparison.words import build_Z
from cornershuffle.comparison.words import y_claim
from cornershuffle.comparison.words import y_products
