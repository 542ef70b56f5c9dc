"""Type definitions shared by the data models."""

from typing import Literal

Vector = list[float]
Matrix = list[list[float]]

PolicyVariant = Literal["known", "unknown"]
ProfileKind = Literal["constant", "step", "f_ratio", "perturbed_f_ratio", "piecewise_linear"]
LowerBoundSuite = Literal["known", "unknown"]
ConcentrationKind = Literal["matrix", "loss"]
