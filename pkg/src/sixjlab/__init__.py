"""Spherical fusion categories at the level of F-matrices and 6j-symbols,
with Levin-Wen plaquette operators on small honeycomb patches."""
from .catcore import (CategoryData, GaugeTransform, Label, apply_gauge, bundled, hom_dim,
                      load_category, total_dim_sq)

__all__ = ['CategoryData', 'GaugeTransform', 'Label', 'apply_gauge', 'bundled', 'hom_dim',
           'load_category', 'total_dim_sq']
__version__ = '0.1.0'
