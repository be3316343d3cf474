"""
Fluid solver: regularized and singular 2D Stokeslet superposition.
"""
from .stokeslets import (
    BlobModel,
    FieldSample,
    ForceSample,
    assemble_point_forces,
    bdoubleprime_delta,
    blob,
    bprime_delta,
    bprime_delta_over_r,
    evaluate_field,
    evaluate_grid,
    g_delta,
    g_delta_prime,
    g_delta_prime_over_r,
    parse_grid,
    singular_field,
)

__all__ = [
    'BlobModel', 'FieldSample', 'ForceSample', 'assemble_point_forces',
    'bdoubleprime_delta', 'blob', 'bprime_delta', 'bprime_delta_over_r',
    'evaluate_field', 'evaluate_grid', 'g_delta', 'g_delta_prime', 'g_delta_prime_over_r',
    'parse_grid', 'singular_field',
]
