from .metric import eval_adjusted_rand
from .metric import eval_identification_accuracy
from .metric import eval_newcomer_detection
from .metric import first_appearances
from .variability import VariabilityReport
from .variability import decompose_variability
from .variability import footstep_covariance
from .variability import group_means
from .variability import scatter_matrices
from .variability import structure_covariance
from .variability import variability_proportion
from .variability import within_person_variability_ratio

__all__ = ['eval_adjusted_rand', 'eval_identification_accuracy',
           'eval_newcomer_detection', 'first_appearances',
           'VariabilityReport', 'decompose_variability',
           'footstep_covariance', 'group_means', 'scatter_matrices',
           'structure_covariance', 'variability_proportion',
           'within_person_variability_ratio']
