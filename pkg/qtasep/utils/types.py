from typing import Union, List, Tuple, Sequence
import numpy as np

RealLike = Union[int, float, np.floating]
"""A type hint for real scalars: :class:`int`, :class:`float` or a numpy float."""

ComplexLike = Union[RealLike, complex, np.complexfloating]
"""A type hint for scalars that may be complex."""

ArrayLike = Union[np.ndarray, List, Tuple]
"""A type hint that represents array-like objects. Can be any of:

- :class:`numpy.ndarray`
- :class:`list`
- :class:`tuple`
"""

RatePairs = Sequence[Tuple[int, float]]
"""Sequence of ``(particle_index, rate)`` pairs, particle indices starting at 1."""
