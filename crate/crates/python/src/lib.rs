use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use soctam::oracle::InstanceBounds;
use soctam::scheduler::Limits;

fn err(e: soctam::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

#[pyclass(name = "Core", frozen, get_all)]
pub struct PyCore {
    id: u32,
    num_inputs: u32,
    num_outputs: u32,
    num_bidirs: u32,
    scan_chain_lengths: Vec<u32>,
    num_patterns: u32,
    power_mw: u32,
}

impl From<&soctam::CoreSpec> for PyCore {
    fn from(c: &soctam::CoreSpec) -> Self {
        PyCore {
            id: c.id,
            num_inputs: c.num_inputs,
            num_outputs: c.num_outputs,
            num_bidirs: c.num_bidirs,
            scan_chain_lengths: c.scan_chain_lengths.clone(),
            num_patterns: c.num_patterns,
            power_mw: c.power_mw,
        }
    }
}

#[pymethods]
impl PyCore {
    fn __repr__(&self) -> String {
        format!(
            "Core(id={}, inputs={}, outputs={}, chains={}, patterns={})",
            self.id,
            self.num_inputs,
            self.num_outputs,
            self.scan_chain_lengths.len(),
            self.num_patterns
        )
    }
}

#[pyclass(name = "Design", frozen)]
pub struct PyDesign {
    inner: soctam::SocDesign,
}

#[pymethods]
impl PyDesign {
    /// Parse design text (ITC'02 or native) with an optional power file text.
    #[new]
    #[pyo3(signature = (text, power=None))]
    fn new(text: &str, power: Option<&str>) -> PyResult<Self> {
        let inner = soctam::load_design(text, power).map_err(err)?;
        Ok(PyDesign { inner })
    }

    #[staticmethod]
    #[pyo3(signature = (seed, n_cores=6, max_chains=8, max_len=100, max_patterns=200, max_power=800))]
    fn random(
        seed: u64,
        n_cores: usize,
        max_chains: u32,
        max_len: u32,
        max_patterns: u32,
        max_power: u32,
    ) -> Self {
        let inner = soctam::random_instance(
            seed,
            InstanceBounds {
                n_cores,
                max_chains,
                max_len,
                max_patterns,
                max_power,
            },
        );
        PyDesign { inner }
    }

    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn cores(&self) -> Vec<PyCore> {
        self.inner.cores.iter().map(PyCore::from).collect()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn to_native(&self) -> String {
        soctam::benchmark::write_native(&self.inner)
    }

    /// `(tam_u, test_time)` points of one core, widest first.
    fn tam_time_table(&self, core_id: u32, w_max: u32) -> PyResult<Vec<(u32, u64)>> {
        let core = self
            .inner
            .core(core_id)
            .ok_or_else(|| err(soctam::Error::UnknownCore(core_id)))?;
        Ok(soctam::tam_time_table(core, w_max)
            .into_iter()
            .map(|p| (p.tam_u, p.test_time))
            .collect())
    }

    /// `(tam_u, s_in, s_out, test_time)` of the wrapper built for `w` wires.
    fn design_wrapper(&self, core_id: u32, w: u32) -> PyResult<(u32, u64, u64, u64)> {
        let core = self
            .inner
            .core(core_id)
            .ok_or_else(|| err(soctam::Error::UnknownCore(core_id)))?;
        let cfg = soctam::design_wrapper(w, core).map_err(err)?;
        Ok((cfg.tam_u, cfg.s_in, cfg.s_out, cfg.test_time))
    }

    #[pyo3(signature = (w_max, p_max=None))]
    fn schedule(&self, w_max: u32, p_max: Option<u64>) -> PyResult<PySchedule> {
        let limits = Limits::new(w_max, p_max);
        let run = soctam::schedule_run(&self.inner, &limits).map_err(err)?;
        Ok(PySchedule {
            inner: run.schedule,
            t_min: run.packing.t_min,
            order: run.packing.order,
        })
    }

    /// Violation messages of `schedule`; empty when it is feasible.
    #[pyo3(signature = (schedule, w_max, p_max=None))]
    fn validate(&self, schedule: &PySchedule, w_max: u32, p_max: Option<u64>) -> Vec<String> {
        soctam::validate(&schedule.inner, &self.inner, &Limits::new(w_max, p_max))
            .iter()
            .map(ToString::to_string)
            .collect()
    }

    #[pyo3(signature = (w_max, p_max=None))]
    fn optimal_makespan(&self, w_max: u32, p_max: Option<u64>) -> PyResult<u64> {
        soctam::brute_force_optimal(&self.inner, &Limits::new(w_max, p_max)).map_err(err)
    }
}

#[pyclass(name = "Schedule", frozen)]
pub struct PySchedule {
    inner: soctam::Schedule,
    #[pyo3(get)]
    t_min: u64,
    #[pyo3(get)]
    order: Vec<u32>,
}

#[pymethods]
impl PySchedule {
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = soctam::Schedule::parse_export(text).map_err(err)?;
        Ok(PySchedule {
            inner,
            t_min: 0,
            order: vec![],
        })
    }

    #[getter]
    fn makespan(&self) -> u64 {
        self.inner.makespan()
    }

    /// `(core, start, finish, width)` rows sorted by core id.
    #[getter]
    fn placements(&self) -> Vec<(u32, u64, u64, u32)> {
        self.inner
            .placements
            .iter()
            .map(|p| (p.core_id, p.start, p.finish, p.width))
            .collect()
    }

    fn export(&self) -> String {
        self.inner.to_export()
    }

    fn svg(&self, w_max: u32) -> String {
        soctam::render::svg_gantt(&self.inner, w_max)
    }
}

#[pyfunction]
fn test_time(patterns: u64, s_in: u64, s_out: u64) -> u64 {
    soctam::test_time(patterns, s_in, s_out)
}

#[pymodule]
fn soctam_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCore>()?;
    m.add_class::<PyDesign>()?;
    m.add_class::<PySchedule>()?;
    m.add_function(wrap_pyfunction!(test_time, m)?)?;
    Ok(())
}
