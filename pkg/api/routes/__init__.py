from . import corpus_routes, lattice_routes, scan_routes, series_routes
