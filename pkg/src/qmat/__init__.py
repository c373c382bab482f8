"""Matroids over idylls, their morphisms, and quiver Grassmannians over F1."""
