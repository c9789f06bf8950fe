from .exceptions import *
from .systems import Family, SipSystem, PacsPoint
from .specfun import SeriesResult, MeijerGSpec, ContourConfig, pfq, meijer_g_q0, log_gamma
from .states import TruncationPolicy, normalization, inner_product, kernel
from .statistics import StatsReport, pnd, mean_n, mean_n2, mandel_q, g2, stats_report
from .measures import QuadratureConfig, EndpointStrategy, weight, moment_check
from .helper_classes import RunConfig
