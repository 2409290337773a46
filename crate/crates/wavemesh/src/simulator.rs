//! Time-domain engines for the three geometries in both formulations:
//! waveguide form (wave variables on branches, scattered at junctions) and
//! finite-difference form (two junction values per node), with excitation,
//! probes, snapshots, and energy accounting.
//!
//! Both formulations expose the same junction signal, and matched injection
//! from rest produces identical signal sequences; the scattering update
//! `out_i = (2/N) sum(in) - in_i` is orthogonal, so the waveguide form
//! conserves branch energy exactly on periodic topologies.

use crate::dispersion::{phase_shift, BandValue, SpatialFrequency};
use crate::error::{Error, Result};
use crate::geometry::{build_topology, BoundaryKind, MeshGeometry, MeshTopology, Port, Region};
use num_complex::Complex64;
use std::f64::consts::TAU;
use std::fmt;
use std::io::{self, Write};
use std::sync::Arc;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formulation {
    WaveguideMesh,
    FiniteDifference,
}

impl Formulation {
    pub fn name(self) -> &'static str {
        match self {
            Formulation::WaveguideMesh => "wm",
            Formulation::FiniteDifference => "fd",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Formulation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "wm" | "waveguide" | "waveguide-mesh" => Ok(Formulation::WaveguideMesh),
            "fd" | "finite-difference" => Ok(Formulation::FiniteDifference),
            other => Err(format!("unknown formulation `{other}`")),
        }
    }
}

/// Additive excitation of one junction: sample n of the signal is added at
/// step n (zero beyond the end of the sequence).
#[derive(Debug, Clone, PartialEq)]
pub struct Excitation {
    pub junction: usize,
    pub signal: Vec<f64>,
}

impl Excitation {
    pub fn new(junction: usize, signal: Vec<f64>) -> Self {
        Excitation { junction, signal }
    }

    /// Unit impulse at step 0.
    pub fn impulse(junction: usize) -> Self {
        Excitation {
            junction,
            signal: vec![1.0],
        }
    }

    pub fn sample(&self, n: usize) -> f64 {
        self.signal.get(n).copied().unwrap_or(0.0)
    }
}

/// Junction-signal sequence recorded at one junction, one sample per step.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSeries {
    pub junction: usize,
    pub samples: Vec<f64>,
}

impl ProbeSeries {
    /// CSV export `step,value`, steps numbered from 0.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "step,value")?;
        for (n, v) in self.samples.iter().enumerate() {
            writeln!(out, "{},{}", n, crate::fmt_sig9(*v))?;
        }
        Ok(())
    }
}

/// Junction signals captured after a given number of completed steps.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: u64,
    pub values: Vec<f64>,
}

impl Snapshot {
    /// CSV export `index,x,y,value`.
    pub fn write_csv<W: Write>(&self, topology: &MeshTopology, mut out: W) -> io::Result<()> {
        writeln!(out, "index,x,y,value")?;
        for (j, v) in self.values.iter().enumerate() {
            let p = topology.junction(j).position;
            writeln!(
                out,
                "{},{},{},{}",
                j,
                crate::fmt_sig9(p[0]),
                crate::fmt_sig9(p[1]),
                crate::fmt_sig9(*v)
            )?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub probes: Vec<ProbeSeries>,
    pub snapshots: Vec<Snapshot>,
}

#[derive(Debug, Clone)]
enum StateData {
    /// One incoming wave variable per directed port, junction-major.
    Wm { incoming: Vec<f64>, next: Vec<f64> },
    /// Junction values at the current and previous step.
    Fd {
        now: Vec<f64>,
        prev: Vec<f64>,
        next: Vec<f64>,
    },
}

/// Time-domain state of a mesh in one of the two formulations.
#[derive(Debug, Clone)]
pub struct SimState {
    topology: Arc<MeshTopology>,
    data: StateData,
    signals: Vec<f64>,
    step_index: u64,
}

impl SimState {
    pub fn new(topology: Arc<MeshTopology>, formulation: Formulation) -> Self {
        let junctions = topology.junction_count();
        let data = match formulation {
            Formulation::WaveguideMesh => {
                let vars = junctions * topology.ports_per_junction();
                StateData::Wm {
                    incoming: vec![0.0; vars],
                    next: vec![0.0; vars],
                }
            }
            Formulation::FiniteDifference => StateData::Fd {
                now: vec![0.0; junctions],
                prev: vec![0.0; junctions],
                next: vec![0.0; junctions],
            },
        };
        SimState {
            topology,
            data,
            signals: vec![0.0; junctions],
            step_index: 0,
        }
    }

    pub fn formulation(&self) -> Formulation {
        match self.data {
            StateData::Wm { .. } => Formulation::WaveguideMesh,
            StateData::Fd { .. } => Formulation::FiniteDifference,
        }
    }

    pub fn topology(&self) -> &MeshTopology {
        &self.topology
    }

    pub fn step_index(&self) -> u64 {
        self.step_index
    }

    fn check_junction(&self, index: usize) -> Result<()> {
        let count = self.topology.junction_count();
        if index >= count {
            return Err(Error::JunctionOutOfRange { index, count });
        }
        Ok(())
    }

    /// Physical field value at a junction: `(2/N) sum(incoming)` in the
    /// waveguide form, the current junction value in the FD form.
    pub fn junction_signal(&self, junction: usize) -> f64 {
        match &self.data {
            StateData::Wm { incoming, .. } => {
                let n = self.topology.ports_per_junction();
                let sum: f64 = incoming[junction * n..(junction + 1) * n].iter().sum();
                2.0 * sum / n as f64
            }
            StateData::Fd { now, .. } => now[junction],
        }
    }

    pub fn junction_signals(&self) -> Vec<f64> {
        (0..self.topology.junction_count())
            .map(|j| self.junction_signal(j))
            .collect()
    }

    /// Direct access to an incoming wave variable (waveguide form only).
    pub fn incoming_wave(&self, junction: usize, port: usize) -> Result<f64> {
        match &self.data {
            StateData::Wm { incoming, .. } => {
                Ok(incoming[junction * self.topology.ports_per_junction() + port])
            }
            StateData::Fd { .. } => Err(Error::FormulationMismatch {
                required: Formulation::WaveguideMesh,
            }),
        }
    }

    /// Overwrite one incoming wave variable (waveguide form only).
    pub fn set_incoming_wave(&mut self, junction: usize, port: usize, value: f64) -> Result<()> {
        self.check_junction(junction)?;
        let n = self.topology.ports_per_junction();
        match &mut self.data {
            StateData::Wm { incoming, .. } => {
                incoming[junction * n + port] = value;
                Ok(())
            }
            StateData::Fd { .. } => Err(Error::FormulationMismatch {
                required: Formulation::WaveguideMesh,
            }),
        }
    }

    /// Seed the FD state directly with current and previous junction values.
    pub fn set_fd_values(&mut self, now_values: &[f64], prev_values: &[f64]) -> Result<()> {
        match &mut self.data {
            StateData::Fd { now, prev, .. } => {
                now.copy_from_slice(now_values);
                prev.copy_from_slice(prev_values);
                Ok(())
            }
            StateData::Wm { .. } => Err(Error::FormulationMismatch {
                required: Formulation::FiniteDifference,
            }),
        }
    }

    /// One scattering-and-propagation step of the waveguide form: junction
    /// signals are scattered into outgoing waves `v - in`, each outgoing wave
    /// travels its branch in one sample, and rim ports reflect with sign
    /// inversion.
    pub fn scatter_step(&mut self) -> Result<()> {
        if self.formulation() != Formulation::WaveguideMesh {
            return Err(Error::FormulationMismatch {
                required: Formulation::WaveguideMesh,
            });
        }
        let topo = Arc::clone(&self.topology);
        let n = topo.ports_per_junction();
        let n_f = n as f64;
        let StateData::Wm { incoming, next } = &mut self.data else {
            unreachable!()
        };
        for (j, v) in self.signals.iter_mut().enumerate() {
            let sum: f64 = incoming[j * n..(j + 1) * n].iter().sum();
            *v = 2.0 * sum / n_f;
        }
        for j in 0..topo.junction_count() {
            for (p, port) in topo.ports_of(j).iter().enumerate() {
                next[j * n + p] = match *port {
                    // wave that departed the neighbor toward us
                    Port::Junction { index, reverse } => {
                        let k = index as usize;
                        self.signals[k] - incoming[k * n + reverse as usize]
                    }
                    // clamped rim: reflect our own outgoing wave negated
                    Port::Rim => incoming[j * n + p] - self.signals[j],
                };
            }
        }
        std::mem::swap(incoming, next);
        self.step_index += 1;
        Ok(())
    }

    /// One update of the finite-difference form: `s_next = (2/N) sum of
    /// neighbor values - s_prev`, with out-of-domain neighbors read as zero.
    pub fn fd_step(&mut self) -> Result<()> {
        if self.formulation() != Formulation::FiniteDifference {
            return Err(Error::FormulationMismatch {
                required: Formulation::FiniteDifference,
            });
        }
        let topo = Arc::clone(&self.topology);
        let n_f = topo.ports_per_junction() as f64;
        let StateData::Fd { now, prev, next } = &mut self.data else {
            unreachable!()
        };
        for (j, out) in next.iter_mut().enumerate() {
            let mut sum = 0.0;
            for port in topo.ports_of(j) {
                if let Port::Junction { index, .. } = port {
                    sum += now[*index as usize];
                }
            }
            *out = 2.0 * sum / n_f - prev[j];
        }
        std::mem::swap(prev, now); // prev <- old now
        std::mem::swap(now, next); // now <- computed next
        self.step_index += 1;
        Ok(())
    }

    /// Advance one step in whichever formulation the state carries.
    pub fn step(&mut self) -> Result<()> {
        match self.formulation() {
            Formulation::WaveguideMesh => self.scatter_step(),
            Formulation::FiniteDifference => self.fd_step(),
        }
    }

    /// Add `value` to the junction signal at one junction. The waveguide form
    /// splits the addition as value/2 per incoming wave so both formulations
    /// see the same signal increment.
    pub fn inject(&mut self, junction: usize, value: f64) -> Result<()> {
        self.check_junction(junction)?;
        let n = self.topology.ports_per_junction();
        match &mut self.data {
            StateData::Wm { incoming, .. } => {
                for w in &mut incoming[junction * n..(junction + 1) * n] {
                    *w += 0.5 * value;
                }
            }
            StateData::Fd { now, .. } => now[junction] += value,
        }
        Ok(())
    }

    /// Total branch energy, the sum of squared wave variables (waveguide form
    /// only; the FD form does not define the equivalent scalar). Constant over
    /// steps on periodic topologies.
    pub fn total_energy(&self) -> Result<f64> {
        match &self.data {
            StateData::Wm { incoming, .. } => Ok(incoming.iter().map(|s| s * s).sum()),
            StateData::Fd { .. } => Err(Error::FormulationMismatch {
                required: Formulation::WaveguideMesh,
            }),
        }
    }

    /// Run `steps` iterations. Each iteration advances one step, injects the
    /// current excitation samples, then records probes; snapshots are taken
    /// whenever the completed-step count is a multiple of `snapshot_every`
    /// (0 disables them). Deterministic: identical inputs give bit-identical
    /// outputs.
    pub fn run(
        &mut self,
        steps: usize,
        probes: &[usize],
        excitations: &[Excitation],
        snapshot_every: usize,
    ) -> Result<RunOutput> {
        for &p in probes {
            self.check_junction(p)?;
        }
        for e in excitations {
            self.check_junction(e.junction)?;
        }
        let mut out = RunOutput {
            probes: probes
                .iter()
                .map(|&j| ProbeSeries {
                    junction: j,
                    samples: Vec::with_capacity(steps),
                })
                .collect(),
            snapshots: Vec::new(),
        };
        for n in 0..steps {
            self.step()?;
            for e in excitations {
                let v = e.sample(n);
                if v != 0.0 {
                    self.inject(e.junction, v)?;
                }
            }
            for series in &mut out.probes {
                series.samples.push(self.junction_signal(series.junction));
            }
            if snapshot_every > 0 && (n + 1) % snapshot_every == 0 {
                out.snapshots.push(Snapshot {
                    step: self.step_index,
                    values: self.junction_signals(),
                });
            }
        }
        Ok(out)
    }
}

/// Smallest positive integer m <= limit with `v * m` integral (within 1e-9).
fn commensurate_multiplier(v: f64, limit: i64) -> Option<i64> {
    for m in 1..=limit {
        let x = v * m as f64;
        if (x - x.round()).abs() <= 1e-9 * x.abs().max(1.0) {
            return Some(m);
        }
    }
    None
}

/// Measure the per-step phase advance of a plane wave on a periodic mesh.
///
/// Builds an FD torus commensurate with `f`, seeds a traveling cosine with the
/// analytic phase shift as the retardation guess, then extracts the phase from
/// the rotation of the spatial Fourier coefficient at `f` between steps (per
/// two steps for the honeycomb, whose recurrence advances two samples). The
/// first 10 steps are discarded as transient. Returns |phase| in radians per
/// time step, directly comparable to [`phase_shift`].
pub fn measure_plane_wave_phase(
    geometry: MeshGeometry,
    d: f64,
    f: SpatialFrequency,
    steps: usize,
) -> Result<f64> {
    let theta_guess = match phase_shift(geometry, d, f)? {
        BandValue::In(v) => v.abs(),
        BandValue::OutOfBand => return Err(Error::OutOfBand),
    };

    let [px, py] = match geometry {
        MeshGeometry::Square => [d, d],
        MeshGeometry::Triangular => [d, crate::geometry::SQRT_3 * d],
        MeshGeometry::Hexagonal => [crate::geometry::SQRT_3 * d, 3.0 * d],
    };
    let incommensurate = || Error::IncommensurateFrequency {
        xi_x: f.xi_x,
        xi_y: f.xi_y,
    };
    let mw = commensurate_multiplier(f.xi_x * px, 128).ok_or_else(incommensurate)?;
    let mh = commensurate_multiplier(f.xi_y * py, 128).ok_or_else(incommensurate)?;
    // pad the torus to several wavelengths so the coefficient sum is well
    // conditioned, keeping commensurability (any multiple of m works)
    let pad = |m: i64| m * (8 / m).max(1);
    let (w, h) = (pad(mw), pad(mh));
    let topology = Arc::new(build_topology(
        geometry,
        d,
        Region::TorusRect {
            width: w as f64 * px,
            height: h as f64 * py,
        },
        BoundaryKind::Periodic,
    )?);

    let phases: Vec<f64> = topology
        .junctions()
        .iter()
        .map(|j| TAU * (j.position[0] * f.xi_x + j.position[1] * f.xi_y))
        .collect();
    let mut state = SimState::new(Arc::clone(&topology), Formulation::FiniteDifference);
    let now: Vec<f64> = phases.iter().map(|p| p.cos()).collect();
    let prev: Vec<f64> = phases.iter().map(|p| (p + theta_guess).cos()).collect();
    state.set_fd_values(&now, &prev)?;

    // spatial Fourier coefficient at f, restricted to one orientation class so
    // the honeycomb's interlaced sublattices do not mix in the sum
    let probe_set: Vec<usize> = topology
        .junctions()
        .iter()
        .enumerate()
        .filter(|(_, j)| j.orientation == 0)
        .map(|(i, _)| i)
        .collect();
    let coefficient = |state: &SimState| -> Complex64 {
        probe_set
            .iter()
            .map(|&j| Complex64::from_polar(1.0, -phases[j]) * state.junction_signal(j))
            .sum()
    };

    let alpha = geometry.alpha() as usize;
    let discard = 10;
    if steps < discard + 2 * alpha {
        return Err(Error::IncommensurateFrequency {
            xi_x: f.xi_x,
            xi_y: f.xi_y,
        });
    }
    let mut coefficients = Vec::with_capacity(steps + 1);
    coefficients.push(coefficient(&state));
    for _ in 0..steps {
        state.fd_step()?;
        coefficients.push(coefficient(&state));
    }

    let mut total = 0.0;
    let mut count = 0usize;
    for n in discard..=(steps - alpha) {
        let z = coefficients[n + alpha] * coefficients[n].conj();
        if z.norm_sqr() > 0.0 {
            total += z.arg();
            count += 1;
        }
    }
    if count == 0 {
        return Err(incommensurate());
    }
    Ok((total / count as f64).abs() / alpha as f64)
}
