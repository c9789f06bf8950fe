from typing import Sequence, Union

import numpy as np

Params = Sequence[float]
Grid = Union[Sequence[float], np.ndarray]
