"""Rotation sets of lifted torus maps: orbit sampling and grid discretisation."""

from .discretize import (AsymptoticUnion, CycleRecord, DiscretizedMap, DiscretizedRotationSet, Grid,
                         RationalVector, asymptotic_union, build_discretized_map, discretized_rotation_set,
                         find_cycles, project)
from .geometry import (ConvexPolygon, convex_hull, hausdorff, segment, unit_square,
                       within_neighborhood)
from .maps import (LiftedMap, MapSpec, builtin, compose, displacement, eval_lift, inverse,
                   power)
from .observable import (RotationSample, SampleSet, SamplingPlan, mean_rotation_vector,
                         orbit_rotation_vector, power_scaling_check, sample_observable)

__all__ = [
    "AsymptoticUnion", "CycleRecord", "DiscretizedMap", "DiscretizedRotationSet", "Grid",
    "RationalVector", "asymptotic_union", "build_discretized_map", "discretized_rotation_set",
    "find_cycles", "project", "ConvexPolygon", "convex_hull", "hausdorff", "segment",
    "unit_square", "within_neighborhood", "LiftedMap", "MapSpec", "builtin", "compose",
    "displacement", "eval_lift", "inverse", "power", "RotationSample", "SampleSet",
    "SamplingPlan", "mean_rotation_vector", "orbit_rotation_vector", "power_scaling_check",
    "sample_observable",
]
