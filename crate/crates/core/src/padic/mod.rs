//! p-adic geometry of truncations: Newton polygons, type-II points, disk
//! counts and the Gauss-point diagnostic.

pub mod disk;
pub mod equidist;
pub mod newton;

pub use disk::{
    bernstein_walsh_check, gauss_seminorm, green_disk, reduction_degree, root_count_in_disk,
    BerkovichPoint, BernsteinWalshReport, Disk,
};
pub use equidist::{validate_probe, CSV_HEADER, default_probes, equidistribution_report, EquidistributionReport, Probe, Verdict};
pub use newton::{valuation_points, newton_polygon, root_valuations, NewtonPolygon, PadicRootMeasure, Segment};
