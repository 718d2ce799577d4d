"""Numerical laboratory for a discrete Carleson operator along the primes."""
from . import arith, config, experiments, io, lambdaset, maximal, multiplier, smooth, variation
from .arith import FareyShell, ReducedFraction, farey_shell, mobius_sieve, sieve_primes, totient_sieve
from .lambdaset import CoveringProfile, LambdaSet
from .maximal import NormEstimate, SignalR, SignalZ
from .multiplier import FreqGrid, PrimeKernel, SampledMultiplier
from .smooth import BumpSpec, CutoffConstants
from .variation import ChainingTree, VectorPath

__version__ = "0.1.0"
