from railyardpy.plotting.static import StaticRailYardPlotter
