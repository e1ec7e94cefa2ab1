"""
Heat kernels on the line, half-line and interval
================================================

The interval kernel can be summed over mirror images (few terms for small
``t``) or over sine modes (few terms for large ``t``).  Poisson summation
says the two agree, but only if the mode exponent is ``m^2 pi^2 t / (2L^2)``.
"""

import numpy as np

from mirrorwalk.kernels import (
    KernelSpec,
    box_kernel_images,
    box_kernel_series,
    gauss,
    halfline_kernel,
    images_terms,
    kernel_cdf,
    poisson_check,
    series_terms,
)

print("G(1,0,0) =", gauss(1, 0, 0), " G(1,0,2) =", gauss(1, 0, 2))
print("H(1,1,1) =", halfline_kernel(1, 1, 1))
print("mass of H(1,1,.) on (0, inf) =", kernel_cdf(KernelSpec("half-line", 1, 1), 0, np.inf))

# %%
# Which exponent matches the image sum?
# -------------------------------------
grid = np.linspace(0.1, 0.9, 9)
for conv in ("half", "unit"):
    worst = max(poisson_check(t, x, y, 1.0, convention=conv) for t in (0.02, 0.1, 0.5, 2) for x in grid for y in grid)
    print(f"convention {conv!r}: max |images - series| = {worst:.2e}")

# %%
# Truncation follows from tail bounds
# -----------------------------------
print(f"\n{'t':>6} {'images M':>9} {'series M':>9}")
for t in (0.001, 0.01, 0.1, 1, 10):
    print(f"{t:6g} {images_terms(t, 1):9d} {series_terms(t, 1):9d}")

ys = np.linspace(0, 1, 6)
print("\nK(0.1, 0.3, y):", np.round(box_kernel_images(0.1, 0.3, ys, 1), 6))
print("series form:   ", np.round(box_kernel_series(0.1, 0.3, ys, 1), 6))
