"""Trajectory metrics: box match accuracy and area accuracy.

bma compares trajectories frame by frame with clamped indexing, so it
rewards both where the camera looked and when. aa compares the unions of
everything each camera visited, so it forgives timing and ordering.
"""

from ptzbench import AngularRect, aa, bma, bootstrap_compare, iou, union_area

a = AngularRect(0, 10, 0, 10)
b = AngularRect(5, 15, 0, 10)
far = AngularRect(100, 110, 0, 10)

print(f"iou(a, a)        = {iou(a, a)}")
print(f"iou(a, shifted)  = {iou(a, b):.4f}   (overlap 50 over union 150)")
print(f"iou(a, far)      = {iou(a, far)}")
print()

rects = [AngularRect(0, 2, 0, 2), AngularRect(1, 3, 1, 3)]
print(f"union_area of two overlapping 2x2 squares = {union_area(rects)}  (4 + 4 - 1)")
print()

expert = [a]
model = [a, far]
print("model lingered on a second, wrong area:")
print(f"  bma(model, expert) = {bma(model, expert)}   (1.0 then 0.0, averaged)")
print(f"  aa(model, expert)  = {aa(model, expert):.4f}")
print()

swapped = [far, a]
print("same frames, wrong order:")
print(f"  bma(swapped, model) = {bma(swapped, model):.4f}  (order matters)")
print(f"  aa(swapped, model)  = {aa(swapped, model):.4f}  (coverage does not)")
print()

import random

rng = random.Random(1)
baseline = [rng.gauss(0.5, 0.05) for _ in range(100)]
improved = [rng.gauss(0.7, 0.05) for _ in range(100)]
report = bootstrap_compare(improved, baseline, iterations=1000, sample_size=100, alpha=0.05, seed=0)
print("bootstrap comparison of an improved model vs its baseline:")
print(f"  mean_diff = {report.mean_diff:.3f}")
print(f"  95% CI    = [{report.ci_low:.3f}, {report.ci_high:.3f}]")
print(f"  p_value   = {report.p_value:.4f}  -> significant = {report.significant}")
