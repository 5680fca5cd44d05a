REPORT_HANDLERS = [
    'torus_lifts.handlers.FilterRecordsHandler',
    'torus_lifts.handlers.FormatRecordsHandler',
]

# Appended to REPORT_HANDLERS by the cli when --color is given
COLOR_HANDLER = 'torus_lifts.handlers.ColorizeRecordsHandler'

RANDOM_SEED = 20240229

# Largest torsion grid that the brute-force oracles are allowed to enumerate
BRUTE_FORCE_LIMIT = 4096
