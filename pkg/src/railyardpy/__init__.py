"""
==========
railyardpy
==========

Free-boundary Macdonald dimer models on rail-yard graphs

"""

__version__ = "0.1.dev0"
