"""Kernel selection: compiled extension when available, numpy fallback
otherwise.  Set HURWITZ_PURE_PY=1 to force the fallback."""

import os

if os.environ.get("HURWITZ_PURE_PY"):
    from . import pure as impl
else:
    try:
        from . import _fast as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as impl

mul = impl.mul
mul_many = impl.mul_many
left_matrix = impl.left_matrix
right_matrix = impl.right_matrix
product_table = impl.product_table
triality_target = impl.triality_target
triality_residual_max = impl.triality_residual_max
jacobi_eigh = impl.jacobi_eigh


def backend_name():
    return impl.NAME
