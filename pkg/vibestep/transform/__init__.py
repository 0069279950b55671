from .fisher import FisherTransform
from .fisher import rayleigh_quotient

__all__ = ['FisherTransform', 'rayleigh_quotient']
