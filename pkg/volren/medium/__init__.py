from volren.medium.fields import (
    BlobsField,
    ConstantField,
    Field,
    GaussianBlobField,
    PiecewiseField,
    StepField,
    as_color,
    sample_field,
)
from volren.medium.io import MediumCSVDriver, read_medium_csv, write_medium_csv
from volren.medium.piecewise import (
    Placement,
    PiecewiseMedium,
    discretize,
    make_piecewise,
    subdivide,
)
from volren.medium.ray import Ray, ray_point
