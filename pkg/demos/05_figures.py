"""Render the number-line waveform figures as SVG.

Run: python3 demos/05_figures.py [outdir]
"""
import sys
from pathlib import Path

from harmonic_sieve import plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "figures")
out.mkdir(exist_ok=True)
for fid in plot.STANDARD_FIGURES:
    spec, cons = plot.figure_setup(fid)
    path = plot.write_figure(fid, out)
    print(f"{path}  anchors={cons.anchors.tolist()[:8]}  markers={plot.marker_positions(spec, cons)[:10]}")

# the custom id starts from a bare number line; here stretched out to x = 60
path = plot.write_figure("custom", out / "figure_custom.svg", x_range=(0.0, 60.0))
print(path)
