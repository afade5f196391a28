"""Concrete instances: finite sets, finite groupoids, universes and JSON input/output."""

from .finset import FinMap, FinSetModel, finmap, finset_model
from .fingpd import (
    EMPTY,
    ONE,
    WALKING_ISO,
    FinGpdModel,
    Functor,
    Groupoid,
    GroupoidError,
    canonical,
    codiscrete,
    delooping,
    discrete,
    fingpd_model,
    functors,
    groupoid,
    is_equivalence,
    is_isofibration,
    natural_isos,
)
from .io import (
    LoadError,
    dump_span,
    dump_universe_spec,
    export_presentation,
    load_presentation,
    load_span,
    load_universe_spec,
)
from .universe import Universe, UniverseError, UniverseSpec, build_seed, generate_universe
