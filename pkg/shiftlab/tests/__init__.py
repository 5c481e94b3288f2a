"""
Test suite for the shiftlab workbench.
"""