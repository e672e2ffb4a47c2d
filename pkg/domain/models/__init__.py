# models/__init__.py
from .series import QSeries
from .theta import MonomialArg
from .expr import ThetaExpr
from .ecs import CosetSystem, IntMatrix
from .quadform import BinaryForm, ExtendedQuadForm
from .expansion import ThetaCombination, ThetaTerm
from .identity import Derivation, IdentityRecord

__all__ = [
    'QSeries', 'MonomialArg', 'ThetaExpr', 'IntMatrix', 'CosetSystem', 'BinaryForm',
    'ExtendedQuadForm', 'ThetaTerm', 'ThetaCombination', 'Derivation', 'IdentityRecord',
]
