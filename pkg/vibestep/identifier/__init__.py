from .dpmm import ASSIGNMENT_MODES
from .dpmm import DPMM
from .dpmm import DpmmConfig
from .dpmm import IdentityDecision
from .dpmm import NEW
from .dpmm import PER_FOOTSTEP
from .dpmm import PER_TRACE_MAJORITY
from .functional import crp_log_weights
from .functional import niw_posterior
from .functional import predictive_distribution
from .functional import student_t_params
from .online import OnlineIdentifier
from .stream import OnlineRunReport
from .stream import identify_stream
from .stream import majority_vote

__all__ = ['ASSIGNMENT_MODES', 'DPMM', 'DpmmConfig', 'IdentityDecision',
           'NEW', 'PER_FOOTSTEP', 'PER_TRACE_MAJORITY', 'crp_log_weights',
           'niw_posterior', 'predictive_distribution', 'student_t_params',
           'OnlineIdentifier', 'OnlineRunReport', 'identify_stream',
           'majority_vote']
