"""Funk, reverse Funk and Hilbert distances in the disk and a random polygon.

Run: python demos/funk_hilbert.py
"""
import math

import numpy as np

from finsler_lab.bodies import PBall
from finsler_lab.domain_geometry import (
    Polyline,
    funk_distance,
    funk_field,
    hilbert_distance,
    path_length,
    rfunk_distance,
)
from finsler_lab.verify import random_polytope

disk = PBall(2.0, 2)
o, x = [0.0, 0.0], [0.5, 0.0]
print(f"funk(0, x)    {float(funk_distance(disk, o, x)):.9f}   log 2     = {math.log(2):.9f}")
print(f"rfunk(0, x)   {float(rfunk_distance(disk, o, x)):.9f}   log 1.5   = {math.log(1.5):.9f}")
print(f"hilbert(0, x) {float(hilbert_distance(disk, o, x)):.9f}   log(3)/2  = {0.5 * math.log(3):.9f}")

# straight segments are geodesics, and a detour is never shorter
poly = random_polytope(2, 0, 3)
c = poly.vertices.mean(axis=0)
p, q = c + 0.6 * (poly.vertices[0] - c), c + 0.6 * (poly.vertices[2] - c)
field = funk_field(poly)
print("\npolygon, p -> q")
print(f"  distance        {float(funk_distance(poly, p, q)):.8f}")
print(f"  straight path   {path_length(field, Polyline.segment(p, q)):.8f}")
print(f"  detour via c    {path_length(field, Polyline([p, c, q])):.8f}")
print(f"  reverse trip    {float(funk_distance(poly, q, p)):.8f}")
