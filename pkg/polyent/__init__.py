"""Polymatroids, entropy cones and partial Dowling geometries"""
