from cornershuffle.spectral.characters import char_bounds
from cornershuffle.spectral.characters import ingram_r
from cornershuffle.spectral.characters import mn_character
from cornershuffle.spectral.characters import three_cycle_class
from cornershuffle.spectral.partitions import PARTITION_MAX_M
from cornershuffle.spectral.partitions import Partition
from cornershuffle.spectral.partitions import conjugate
from cornershuffle.spectral.partitions import dimension
from cornershuffle.spectral.partitions import partition_count
from cornershuffle.spectral.partitions import partitions
from cornershuffle.spectral.spectrum import SPECTRUM_MAX_M
from cornershuffle.spectral.spectrum import SpectrumEntry
from cornershuffle.spectral.spectrum import alternating_mean_sign
from cornershuffle.spectral.spectrum import r_kernel
from cornershuffle.spectral.spectrum import r_spectrum
from cornershuffle.spectral.spectrum import ubl_bound
from cornershuffle.spectral.spectrum import ubl_partial_sums
