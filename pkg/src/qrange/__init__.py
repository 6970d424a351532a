"""q-numerical ranges and radii of small complex matrices."""
