use super::scenario::Trajectory;

/// Closest point of approach of two trajectories.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cpa {
    /// Time of closest approach, s.
    pub t_cpa: f64,
    /// Center distance at `t_cpa`, m.
    pub miss: f64,
}

/// Minimizes `|p_i(t) - p_j(t)|` over the common flight window
/// `[0, min(T_i, T_j)]`.
pub fn cpa(a: &Trajectory, b: &Trajectory) -> Cpa {
    let [ax, ay] = a.start();
    let [bx, by] = b.start();
    let [avx, avy] = a.velocity();
    let [bvx, bvy] = b.velocity();
    let (dx, dy) = (ax - bx, ay - by);
    let (dvx, dvy) = (avx - bvx, avy - bvy);
    let window = a.duration().min(b.duration());
    let dv2 = dvx * dvx + dvy * dvy;
    let t_cpa = if dv2 > 0.0 {
        (-(dx * dvx + dy * dvy) / dv2).clamp(0.0, window)
    } else {
        0.0
    };
    let miss = (dx + dvx * t_cpa).hypot(dy + dvy * t_cpa);
    Cpa { t_cpa, miss }
}
