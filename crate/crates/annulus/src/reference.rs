//! Published reference values for nine eccentric configurations: the first eigenvalue and
//! the squared inner-boundary flux at 15° steps from the side nearest the outer circle.

/// Angles of the flux samples, in degrees.
pub const ANGLES_DEG: [u32; 13] = [0, 15, 30, 45, 60, 75, 90, 105, 120, 135, 150, 165, 180];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceCase {
    pub a: f64,
    pub h: f64,
    pub lambda: f64,
    /// `u_N²` at [`ANGLES_DEG`].
    pub u_n_sq: [f64; 13],
}

/// Reference `λ(0)` for each hole radius, `(a, λ)`.
pub const CONCENTRIC: [(f64, f64); 3] = [(0.1, 10.98324859), (0.3, 19.46950428), (0.6, 61.2854372)];

pub const CASES: [ReferenceCase; 9] = [
    ReferenceCase {
        a: 0.1,
        h: 0.1,
        lambda: 10.51624800,
        u_n_sq: [
            0.18340156, 0.18586555, 0.19312533, 0.20478642, 0.22019869, 0.23846941, 0.25848609, 0.27895498,
            0.29846292, 0.31556947, 0.32892971, 0.33743644, 0.34035750,
        ],
    },
    ReferenceCase {
        a: 0.1,
        h: 0.3,
        lambda: 8.76956649,
        u_n_sq: [
            0.08997194, 0.09354750, 0.10408993, 0.12105508, 0.14357017, 0.17048691, 0.20042583, 0.23176494,
            0.26256868, 0.29053976, 0.31313057, 0.32789921, 0.33304454,
        ],
    },
    ReferenceCase {
        a: 0.1,
        h: 0.6,
        lambda: 6.91928150,
        u_n_sq: [
            0.03502936, 0.03875921, 0.04977909, 0.06745736, 0.09052611, 0.11728631, 0.14624640, 0.17645804,
            0.20707716, 0.23653390, 0.26197403, 0.27954557, 0.28585725,
        ],
    },
    ReferenceCase {
        a: 0.1,
        h: 0.8,
        lambda: 6.21431318,
        u_n_sq: [
            0.00538128, 0.00792279, 0.01615017, 0.03118122, 0.05294918, 0.07901455, 0.10706183, 0.13678539,
            0.16793719, 0.19964213, 0.22879649, 0.24990529, 0.25766770,
        ],
    },
    ReferenceCase {
        a: 0.3,
        h: 0.1,
        lambda: 17.00607073,
        u_n_sq: [
            0.04651448, 0.05078040, 0.06389146, 0.08665951, 0.12001996, 0.16444947, 0.21927390, 0.28204163,
            0.34820007, 0.41130766, 0.46389778, 0.49888764, 0.51117180,
        ],
    },
    ReferenceCase {
        a: 0.3,
        h: 0.3,
        lambda: 12.31240018,
        u_n_sq: [
            0.00601084, 0.00792264, 0.01432651, 0.02711431, 0.04901522, 0.08285892, 0.13049149, 0.19150347,
            0.26211532, 0.33475001, 0.39885669, 0.44319924, 0.45907590,
        ],
    },
    ReferenceCase {
        a: 0.3,
        h: 0.6,
        lambda: 8.54494014,
        u_n_sq: [
            0.00006665, 0.00029224, 0.00162487, 0.00616138, 0.01734345, 0.03916871, 0.07481155, 0.12521694,
            0.18784387, 0.25580537, 0.31827254, 0.36272535, 0.37887932,
        ],
    },
    ReferenceCase {
        a: 0.6,
        h: 0.1,
        lambda: 42.71463081,
        u_n_sq: [
            0.00010994, 0.00025775, 0.00101252, 0.00370221, 0.01190759, 0.03332159, 0.08086609, 0.17026477,
            0.32267905, 0.49728793, 0.69311417, 0.84533543, 0.90307061,
        ],
    },
    ReferenceCase {
        a: 0.6,
        h: 0.3,
        lambda: 23.79696055,
        u_n_sq: [
            0.00000018, 0.00000144, 0.00002268, 0.00026580, 0.00195778, 0.00947178, 0.03287792, 0.08782665,
            0.18896048, 0.33653240, 0.50402714, 0.64040281, 0.69330938,
        ],
    },
];

pub fn case(a: f64, h: f64) -> Option<&'static ReferenceCase> {
    CASES.iter().find(|c| c.a == a && c.h == h)
}
