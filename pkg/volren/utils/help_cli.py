HELP_SCENE = """
    The scene to render. Can be either the name of a built-in scene (constant, step, blob, blobs), i.e. the file name
    without the .yaml located in the "configurations/scene" folder, or a path to your own scene yaml (a "field" node
    with a _target_ and a "ray" node).
"""

HELP_PARAMS = """
    Comma-separated K=V overrides applied to the scene field, e.g. "sigma0=4,center=[0,0.2,0]". Values are parsed as
    yaml, so lists go inside brackets.
"""

HELP_CAMERA = """
    Comma-separated K=V overrides applied to the orthographic camera (x_min, x_max, y_min, y_max, z_near, z_far).
"""

HELP_RAY = """
    Comma-separated K=V overrides applied to the scene ray (origin, direction, t_near, t_far).
"""

HELP_MEDIUM = """
    Path to a medium CSV: a "t0,t1,sigma,r,g,b" header and one contiguous row per segment.
"""

HELP_BACKGROUND = "Background color as R,G,B in [0, 1], composited with the residual transmittance."

HELP_WORKERS = "Number of worker threads. Results do not depend on it."

HELP_PROGRESS = "Show a progress bar on stderr."
