"""Image persistence barcodes for inclusions of Vietoris-Rips filtrations."""

from .algebra import InvariantError, PrimeField, reduce_matrix, reduce_with_clearing
from .barcode import Barcode, Interval
from .pipeline import compute_image_barcode, compute_image_barcode_homology, compute_single_barcode
from .rips import (DistanceMatrix, DominanceError, FiltrationPair, InputError, parse_distance_input,
                   validate_dominance)

__all__ = [
    "Barcode", "DistanceMatrix", "DominanceError", "FiltrationPair", "InputError", "Interval",
    "InvariantError", "PrimeField", "compute_image_barcode", "compute_image_barcode_homology",
    "compute_single_barcode", "parse_distance_input", "reduce_matrix", "reduce_with_clearing",
    "validate_dominance",
]
