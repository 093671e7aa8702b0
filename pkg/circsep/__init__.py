"""
circsep - circular separability of polygons
Smallest separating circles and largest inscribed circles under constraints
"""
__version__ = "1.0.0"
