from .tape import Tape, Var, ShapeError, stable_bce
from .rng import Rng
from .adam import Adam
from .gradcheck import grad_check

__all__ = ["Tape", "Var", "ShapeError", "stable_bce", "Rng", "Adam", "grad_check"]
