//! Grid evaluation of the closed-form pipeline.

use nvsqueeze::lindblad::{assemble, build_operators, steady_state_escalating};
use nvsqueeze::model::{detuning_for_resonance, dressed_frame};
use nvsqueeze::moments::{quadrature_variance, stability_check, steady_moments_two_mode, steady_moments_unchecked, two_mode_variance, variance_approx};
use nvsqueeze::reduced::{coefficients_approx, coefficients_exact, reduced_generator_single};
use nvsqueeze::spinsolver::spin_steady_closed;
use nvsqueeze::{Error, SystemParams, C};
use rayon::prelude::*;
use serde::Serialize;

/// Parameters that may be swept.
pub const AXIS_NAMES: &[&str] = &["omega0", "omega1", "delta", "g", "phi", "gamma_m", "n_th", "gamma0", "gamma1", "omega_m"];

/// Fock cutoffs for the per-row oracle.
const ORACLE_START: usize = 16;
const ORACLE_MAX: usize = 128;
const ORACLE_EPS: f64 = crate::validate::FOCK_TAIL_EPS;

#[derive(Clone, Debug, PartialEq)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, count: usize) -> Self {
        Axis { name: name.into(), min, max, count }
    }

    pub fn values(&self) -> Vec<f64> {
        let step = (self.max - self.min) / (self.count - 1) as f64;
        (0..self.count).map(|i| if i + 1 == self.count { self.max } else { self.min + step * i as f64 }).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Output {
    NSs,
    Pair,
    VarX,
    VarP,
    VarXMinusQuarter,
    SqueezingDb,
    AMinus,
    APlus,
    DeltaShift,
    S1,
    S2,
    OmegaAb,
    OmegaBc,
    Theta,
    Stability,
    Cooperativity,
    VarXApprox,
}

impl Output {
    pub const ALL: [Output; 17] = [
        Output::NSs,
        Output::Pair,
        Output::VarX,
        Output::VarP,
        Output::VarXMinusQuarter,
        Output::SqueezingDb,
        Output::AMinus,
        Output::APlus,
        Output::DeltaShift,
        Output::S1,
        Output::S2,
        Output::OmegaAb,
        Output::OmegaBc,
        Output::Theta,
        Output::Stability,
        Output::Cooperativity,
        Output::VarXApprox,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Output::NSs => "n_ss",
            Output::Pair => "pair",
            Output::VarX => "var_x",
            Output::VarP => "var_p",
            Output::VarXMinusQuarter => "var_x_minus_quarter",
            Output::SqueezingDb => "squeezing_db",
            Output::AMinus => "a_minus",
            Output::APlus => "a_plus",
            Output::DeltaShift => "delta_shift",
            Output::S1 => "s1",
            Output::S2 => "s2",
            Output::OmegaAb => "omega_ab",
            Output::OmegaBc => "omega_bc",
            Output::Theta => "theta",
            Output::Stability => "stability",
            Output::Cooperativity => "cooperativity",
            Output::VarXApprox => "var_x_approx",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|o| o.name() == s)
    }

    fn is_complex(self) -> bool {
        matches!(self, Output::Pair | Output::S1 | Output::S2)
    }

    /// Needs a stable steady state; blank on unstable rows.
    fn is_steady(self) -> bool {
        matches!(
            self,
            Output::NSs | Output::Pair | Output::VarX | Output::VarP | Output::VarXMinusQuarter | Output::SqueezingDb | Output::VarXApprox
        )
    }

    fn columns(self) -> Vec<String> {
        if self.is_complex() {
            ["re", "im", "abs"].iter().map(|s| format!("{}_{s}", self.name())).collect()
        } else if self == Output::Stability {
            vec!["stable".into(), "max_re_eigenvalue".into()]
        } else {
            vec![self.name().into()]
        }
    }
}

#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axes: Vec<Axis>,
    pub resonance_lock: bool,
    pub outputs: Vec<Output>,
    pub two_mode: bool,
    pub validate_with_oracle: bool,
    pub oracle_stride: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<(), String> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(format!("need 1 or 2 axes, got {}", self.axes.len()));
        }
        for a in &self.axes {
            if !AXIS_NAMES.contains(&a.name.as_str()) {
                return Err(format!("axis '{}' is not sweepable (allowed: {})", a.name, AXIS_NAMES.join(", ")));
            }
            if a.count < 2 {
                return Err(format!("axis '{}' needs count >= 2", a.name));
            }
            if !(a.min.is_finite() && a.max.is_finite() && a.min < a.max) {
                return Err(format!("axis '{}' needs finite min < max", a.name));
            }
        }
        if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
            return Err("the two axes must differ".into());
        }
        if self.resonance_lock && self.axes.iter().any(|a| a.name == "delta") {
            return Err("cannot sweep delta with resonance_lock on".into());
        }
        if self.outputs.is_empty() && !self.two_mode {
            return Err("no outputs requested".into());
        }
        if self.validate_with_oracle && self.oracle_stride == 0 {
            return Err("oracle_stride must be >= 1".into());
        }
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.axes.iter().map(|a| a.count).product()
    }

    pub fn columns(&self) -> Vec<String> {
        let mut c = vec!["index".to_string()];
        c.extend(self.axes.iter().map(|a| a.name.clone()));
        if !self.axes.iter().any(|a| a.name == "delta") {
            c.push("delta".into());
        }
        for o in &self.outputs {
            c.extend(o.columns());
        }
        if self.two_mode {
            c.extend(["sum_occupancy", "sum_pair_re", "sum_pair_im", "sum_pair_abs", "var_u"].map(String::from));
        }
        if self.validate_with_oracle {
            c.extend(["oracle_fock_dim", "oracle_n_err", "oracle_pair_err"].map(String::from));
        }
        c.push("status".into());
        c
    }

    fn point(&self, index: usize) -> (Vec<f64>, SystemParams) {
        let mut p = self.base;
        let mut coords = Vec::with_capacity(self.axes.len());
        let mut rest = index;
        let mut idx = vec![0; self.axes.len()];
        for (k, a) in self.axes.iter().enumerate().rev() {
            idx[k] = rest % a.count;
            rest /= a.count;
        }
        for (a, &i) in self.axes.iter().zip(&idx) {
            let v = a.values()[i];
            coords.push(v);
            set_param(&mut p, &a.name, v);
        }
        (coords, p)
    }
}

fn set_param(p: &mut SystemParams, name: &str, v: f64) {
    match name {
        "omega0" => p.omega0 = v,
        "omega1" => p.omega1 = v,
        "delta" => p.delta = v,
        "g" => p.g = v,
        "phi" => p.phi = v,
        "gamma_m" => p.gamma_m = v,
        "n_th" => p.n_th = v,
        "gamma0" => {
            // keep Γ₁ = Γ₀ when they start out tied
            if p.gamma1 == p.gamma0 {
                p.gamma1 = v;
            }
            p.gamma0 = v;
        }
        "gamma1" => p.gamma1 = v,
        "omega_m" => p.omega_m = v,
        _ => unreachable!("axis names are validated"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    Unstable,
    ApproxInvalid,
    TruncationEscalated,
    TruncationCap,
    NoResonance,
    Degenerate,
    NonPhysical,
    InvalidParams,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Unstable => "unstable",
            Status::ApproxInvalid => "approx-invalid",
            Status::TruncationEscalated => "truncation-escalated",
            Status::TruncationCap => "truncation-cap",
            Status::NoResonance => "no-resonance",
            Status::Degenerate => "degenerate",
            Status::NonPhysical => "non-physical",
            Status::InvalidParams => "invalid-params",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Num(f64),
    Bool(bool),
    Empty,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub index: usize,
    pub coords: Vec<f64>,
    pub delta: f64,
    /// One cell per column except the trailing `status`.
    pub values: Vec<Cell>,
    pub status: Status,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Value of `column` in each row (None for blank cells, booleans as 0/1).
    pub fn column(&self, column: &str) -> Option<Vec<Option<f64>>> {
        let k = self.columns.iter().position(|c| c == column)?;
        Some(
            self.rows
                .iter()
                .map(|r| match r.values.get(k) {
                    Some(Cell::Num(x)) => Some(*x),
                    Some(Cell::Bool(b)) => Some(f64::from(u8::from(*b))),
                    _ => None,
                })
                .collect(),
        )
    }
}

fn complex_cells(z: C<f64>) -> [Cell; 3] {
    [Cell::Num(z.re), Cell::Num(z.im), Cell::Num(z.norm())]
}

fn evaluate(spec: &SweepSpec, index: usize) -> SweepRow {
    let (coords, mut p) = spec.point(index);
    let delta_col = !spec.axes.iter().any(|a| a.name == "delta");
    let ncols = spec.columns().len() - 2 - spec.axes.len() - usize::from(delta_col);
    let row = |cells: Vec<Cell>, status: Status, delta: f64| {
        let mut values = vec![Cell::Num(index as f64)];
        values.extend(coords.iter().map(|&x| Cell::Num(x)));
        if delta_col {
            values.push(if delta.is_finite() { Cell::Num(delta) } else { Cell::Empty });
        }
        values.extend(cells);
        SweepRow { index, coords: coords.clone(), delta, values, status }
    };
    let blank = |status: Status, delta: f64| row(vec![Cell::Empty; ncols], status, delta);

    if spec.resonance_lock {
        match detuning_for_resonance(p.omega_m, p.omega0, p.omega1) {
            Ok(d) => p.delta = d,
            Err(_) => return blank(Status::NoResonance, f64::NAN),
        }
    }
    if p.validate().is_err() {
        return blank(Status::InvalidParams, p.delta);
    }
    let frame = dressed_frame(&p);
    let spin = spin_steady_closed(&p);
    let coef = match coefficients_exact(&frame, &spin, p.gamma1) {
        Ok(c) => c,
        Err(_) => return blank(Status::Degenerate, p.delta),
    };
    let st = stability_check(&coef, p.gamma_m);
    let mut status = if st.stable { Status::Ok } else { Status::Unstable };
    let (n, pair) = steady_moments_unchecked(&coef, p.gamma_m, p.n_th);
    let report = if st.stable {
        match quadrature_variance(n, pair) {
            Ok(r) => Some(r),
            Err(_) => {
                status = Status::NonPhysical;
                None
            }
        }
    } else {
        None
    };

    let mut cells = Vec::with_capacity(ncols);
    for &o in &spec.outputs {
        if o.is_steady() && report.is_none() {
            cells.extend(std::iter::repeat(Cell::Empty).take(o.columns().len()));
            continue;
        }
        match o {
            Output::NSs => cells.push(Cell::Num(n)),
            Output::Pair => cells.extend(complex_cells(pair)),
            Output::VarX => cells.push(Cell::Num(report.unwrap().var_x)),
            Output::VarP => cells.push(Cell::Num(report.unwrap().var_p)),
            Output::VarXMinusQuarter => cells.push(Cell::Num(report.unwrap().var_x - 0.25)),
            Output::SqueezingDb => cells.push(Cell::Num(report.unwrap().squeezing_db)),
            Output::AMinus => cells.push(Cell::Num(coef.a_minus)),
            Output::APlus => cells.push(Cell::Num(coef.a_plus)),
            Output::DeltaShift => cells.push(Cell::Num(coef.delta_shift)),
            Output::S1 => cells.extend(complex_cells(coef.s1)),
            Output::S2 => cells.extend(complex_cells(coef.s2)),
            Output::OmegaAb => cells.push(Cell::Num(frame.omega_ab / p.omega_m)),
            Output::OmegaBc => cells.push(Cell::Num(frame.omega_bc / p.omega_m)),
            Output::Theta => cells.push(Cell::Num(frame.theta)),
            Output::Stability => {
                cells.push(Cell::Bool(st.stable));
                cells.push(Cell::Num(st.max_re));
            }
            Output::Cooperativity => cells.push(Cell::Num(p.cooperativity())),
            Output::VarXApprox => match coefficients_approx(&frame, p.gamma0, p.g) {
                Ok(a) => cells.push(Cell::Num(variance_approx(&frame, &a, p.gamma_m, p.n_th))),
                Err(_) => {
                    cells.push(Cell::Empty);
                    if status == Status::Ok {
                        status = Status::ApproxInvalid;
                    }
                }
            },
        }
    }
    if spec.two_mode {
        match (report.is_some(), steady_moments_two_mode(&coef, p.gamma_m, p.n_th)) {
            (true, Ok((occ, sp))) => {
                cells.push(Cell::Num(occ));
                cells.extend(complex_cells(sp));
                cells.push(Cell::Num(two_mode_variance(occ, sp)));
            }
            _ => cells.extend([Cell::Empty; 5]),
        }
    }
    if spec.validate_with_oracle {
        let due = index % spec.oracle_stride == 0 && report.is_some();
        let res = due.then(|| {
            steady_state_escalating(1, 1, ORACLE_START, ORACLE_MAX, ORACLE_EPS, |s| {
                assemble(&reduced_generator_single(&coef, p.gamma_m, p.n_th), s)
            })
        });
        match res {
            Some(Ok(e)) => {
                let ops = build_operators::<f64>(&e.space, None);
                let fn_ = e.state.expect(&ops.number[0]).re;
                let fp = e.state.expect(&ops.lower[0].matmul(&ops.lower[0]));
                cells.push(Cell::Num(e.space.fock_dims[0] as f64));
                cells.push(Cell::Num((fn_ - n).abs()));
                cells.push(Cell::Num((fp - pair).norm()));
                if e.space.fock_dims[0] > ORACLE_START && status == Status::Ok {
                    status = Status::TruncationEscalated;
                }
            }
            Some(Err(err)) => {
                cells.extend([Cell::Empty; 3]);
                if status == Status::Ok {
                    status = if matches!(err, Error::TruncationCapExceeded(_)) { Status::TruncationCap } else { Status::Degenerate };
                }
            }
            None => cells.extend([Cell::Empty; 3]),
        }
    }
    debug_assert_eq!(cells.len(), ncols);
    row(cells, status, p.delta)
}

/// Evaluate every grid point. Rows come back in grid order (first axis
/// slowest) whatever the thread count.
pub fn run_sweep(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult, String> {
    spec.validate()?;
    let n = spec.rows();
    let work = || (0..n).into_par_iter().map(|i| evaluate(spec, i)).collect::<Vec<_>>();
    let rows = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new().num_threads(t).build().map_err(|e| e.to_string())?.install(work),
        None => work(),
    };
    Ok(SweepResult { columns: spec.columns(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(outputs: Vec<Output>) -> SweepSpec {
        SweepSpec {
            base: SystemParams::baseline(),
            axes: vec![Axis::new("omega0", 0.1, 1.4, 6)],
            resonance_lock: true,
            outputs,
            two_mode: false,
            validate_with_oracle: false,
            oracle_stride: 1,
        }
    }

    #[test]
    fn grid_order_and_columns() {
        let mut s = spec(vec![Output::NSs, Output::S1, Output::Stability]);
        s.axes.push(Axis::new("omega1", -0.5, 0.5, 3));
        let r = run_sweep(&s, Some(3)).unwrap();
        assert_eq!(r.rows.len(), 18);
        assert_eq!(
            r.columns,
            ["index", "omega0", "omega1", "delta", "n_ss", "s1_re", "s1_im", "s1_abs", "stable", "max_re_eigenvalue", "status"]
        );
        assert_eq!(r.rows[4].coords, vec![0.1 + 1.3 / 5.0, 0.0]);
        assert!(r.rows.iter().enumerate().all(|(i, row)| row.index == i));
        for row in &r.rows {
            let p = SystemParams { delta: row.delta, omega0: row.coords[0], omega1: row.coords[1], ..SystemParams::baseline() };
            assert!((dressed_frame(&p).omega_bc - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn unstable_rows_carry_no_steady_values() {
        let mut s = spec(vec![Output::NSs, Output::AMinus]);
        s.base.gamma_m = 0.0;
        s.base.n_th = 0.0;
        s.axes = vec![Axis::new("omega0", 0.30, 0.32, 2)];
        s.base.omega1 = -0.9;
        let r = run_sweep(&s, None).unwrap();
        assert!(r.rows.iter().any(|row| row.status == Status::Unstable));
        for row in &r.rows {
            if row.status == Status::Unstable {
                assert_eq!(row.values[3], Cell::Empty);
                assert!(matches!(row.values[4], Cell::Num(_)));
            }
        }
    }

    #[test]
    fn near_degenerate_axis_gives_near_identical_rows() {
        let mut s = spec(vec![Output::NSs]);
        s.axes = vec![Axis::new("omega0", 0.5, 0.5 + 1e-12, 2)];
        let r = run_sweep(&s, None).unwrap();
        let n = r.column("n_ss").unwrap();
        assert!((n[0].unwrap() - n[1].unwrap()).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_specs() {
        let mut s = spec(vec![Output::NSs]);
        s.axes[0].name = "bogus".into();
        assert!(s.validate().is_err());
        let mut s = spec(vec![Output::NSs]);
        s.axes[0].name = "delta".into();
        assert!(s.validate().is_err());
        let mut s = spec(vec![Output::NSs]);
        s.axes[0].max = s.axes[0].min;
        assert!(s.validate().is_err());
    }

    #[test]
    fn no_resonance_rows_are_flagged() {
        let mut s = spec(vec![Output::NSs]);
        s.axes = vec![Axis::new("omega1", -1.6, -1.4, 2)];
        let r = run_sweep(&s, None).unwrap();
        assert!(r.rows.iter().all(|row| row.status == Status::NoResonance));
    }

    #[test]
    fn oracle_columns_on_stride() {
        let mut s = spec(vec![Output::NSs]);
        s.base.n_th = 0.5;
        s.base.gamma_m = 1e-3;
        s.axes = vec![Axis::new("omega0", 0.3, 0.6, 3)];
        s.validate_with_oracle = true;
        s.oracle_stride = 2;
        let r = run_sweep(&s, None).unwrap();
        let err = r.column("oracle_n_err").unwrap();
        assert!(err[0].unwrap() < 1e-6 && err[1].is_none() && err[2].unwrap() < 1e-6);
    }
}
