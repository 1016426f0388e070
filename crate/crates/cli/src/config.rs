//! JSON experiment configuration: schema types (unknown keys rejected) and
//! conversion into runtime scenarios.

use nalgebra::{DMatrix, DVector, Matrix2, Matrix3, Matrix6, Vector3};
use serde::Deserialize;
use thiserror::Error;

use sea_scbf_core::barriers::{
    AffineFacet, CorridorEnvironment, LaneBarrier, Obstacle, SlitBarrier, SlitBarrierParams,
};
use sea_scbf_core::estimation::LinearSystem;
use sea_scbf_core::filters::FilterConfig;
use sea_scbf_core::lie::{MatrixLieGroup, Se2, Se3};
use sea_scbf_core::sim::{
    EnvironmentMode, FilterMethod, GoalSpec, InitialBeliefSpec, LinearEnvironment, LinearNominal,
    LinearScenario, Scenario, Se2Scenario, Se3Scenario,
};
use sea_scbf_core::Real;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("config does not match the schema: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
}

fn invalid<E: std::fmt::Display>(e: E) -> ConfigError {
    ConfigError::Invalid(e.to_string())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Which command this config is written for (documentation only).
    pub experiment: String,
    pub scenario: ScenarioConfig,
    pub campaign: CampaignConfig,
    #[serde(default)]
    pub sweep: Option<SweepConfig>,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub trials: usize,
    pub seed_base: u64,
    #[serde(default)]
    pub threads: Option<usize>,
    /// Fraction of filtered steps allowed to report an infeasible solve
    /// before the run exits with the infeasibility code.
    #[serde(default = "default_infeasibility_budget")]
    pub infeasibility_budget: f64,
}

fn default_infeasibility_budget() -> f64 {
    0.25
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub sigma_y: Vec<f64>,
    pub beta: Vec<f64>,
    pub horizons: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScenarioConfig {
    Linear(LinearConfig),
    Se2(Se2Config),
    Se3(Se3Config),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearConfig {
    pub dt: f64,
    pub horizon: usize,
    /// Per-axis process noise standard deviations.
    pub process_noise_std: Vec<f64>,
    /// Per-axis measurement noise standard deviations.
    pub measurement_noise_std: Vec<f64>,
    /// Optional full dynamics matrices (row-major); identity-based defaults
    /// `A = I`, `B = I dt`, `H = I` otherwise.
    #[serde(default)]
    pub a_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub b_matrix: Option<Vec<Vec<f64>>>,
    #[serde(default)]
    pub h_matrix: Option<Vec<Vec<f64>>>,
    pub alpha: f64,
    pub beta: f64,
    pub beta_rate: f64,
    #[serde(default)]
    pub pcbf_quantile: f64,
    pub method: MethodConfig,
    pub environment: EnvironmentConfig,
    pub nominal: NominalConfig,
    pub initial_state: Vec<f64>,
    pub initial_belief: InitialBeliefConfig,
    #[serde(default = "default_mode")]
    pub env_mode: ModeConfig,
    #[serde(default)]
    pub goal: Option<GoalConfig>,
}

fn default_mode() -> ModeConfig {
    ModeConfig::Accurate
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MethodConfig {
    SeaScbf,
    SeaEd,
    SeaPcbf,
    None,
}

impl From<MethodConfig> for FilterMethod {
    fn from(m: MethodConfig) -> Self {
        match m {
            MethodConfig::SeaScbf => FilterMethod::SeaScbf,
            MethodConfig::SeaEd => FilterMethod::SeaEd,
            MethodConfig::SeaPcbf => FilterMethod::SeaPcbf,
            MethodConfig::None => FilterMethod::None,
        }
    }
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeConfig {
    Accurate,
    Inaccurate,
}

impl From<ModeConfig> for EnvironmentMode {
    fn from(m: ModeConfig) -> Self {
        match m {
            ModeConfig::Accurate => EnvironmentMode::Accurate,
            ModeConfig::Inaccurate => EnvironmentMode::Inaccurate,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnvironmentConfig {
    Facet {
        normal: Vec<f64>,
        offset: f64,
    },
    Corridor {
        obstacles: Vec<ObstacleConfig>,
        walls: Vec<WallConfig>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObstacleConfig {
    pub center: Vec<f64>,
    pub circumradius: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WallConfig {
    pub normal: Vec<f64>,
    pub offset: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case", deny_unknown_fields)]
pub enum NominalConfig {
    OpenLoop { control: Vec<f64> },
    GotoPosition { goal: Vec<f64> },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialBeliefConfig {
    Exact,
    FirstMeasurement,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GoalConfig {
    pub position: Vec<f64>,
    pub radius: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Se2Config {
    pub dt: f64,
    pub horizon: usize,
    /// Standard deviations of the twist noise `(omega, v_x, v_y)`.
    pub process_noise_std: Vec<f64>,
    /// Standard deviations of the position measurement noise.
    pub position_noise_std: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub beta_rate: f64,
    pub lane_offset: f64,
    pub nominal_twist: Vec<f64>,
    /// Initial pose as `(x, y, heading)`.
    pub initial_pose: Vec<f64>,
    /// Isotropic initial covariance.
    pub initial_cov: f64,
    /// Twist coordinates pinned to zero (nonholonomic directions).
    #[serde(default)]
    pub pinned: Vec<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Se3Config {
    pub dt: f64,
    pub horizon: usize,
    pub rotation_noise_std: f64,
    pub translation_noise_std: f64,
    pub pose_noise_std: f64,
    pub alpha: f64,
    pub beta: f64,
    pub beta_rate: f64,
    #[serde(default = "default_true")]
    pub curvature: bool,
    pub slit: SlitConfig,
    pub goal_position: Vec<f64>,
    pub initial_cov: f64,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlitConfig {
    pub wall_centers: [Vec<f64>; 2],
    pub slit_normal: Vec<f64>,
    pub disk_normal: Vec<f64>,
    pub disk_radius: f64,
    pub margin: f64,
    pub far_value: f64,
    pub sharpness: f64,
    /// Isotropic gate covariance scale.
    pub gate_cov: f64,
    #[serde(default)]
    pub gate_offset: Option<Vec<f64>>,
}

pub fn load(path: &std::path::Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(serde_json::from_str(&text)?)
}

fn vec3(v: &[f64], what: &str) -> Result<Vector3<Real>, ConfigError> {
    if v.len() != 3 {
        return Err(ConfigError::Invalid(format!(
            "{what} must have 3 entries, got {}",
            v.len()
        )));
    }
    Ok(Vector3::new(v[0], v[1], v[2]))
}

fn matrix_from_rows(rows: &[Vec<f64>], n: usize, what: &str) -> Result<DMatrix<Real>, ConfigError> {
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(ConfigError::Invalid(format!("{what} must be {n}x{n}")));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

impl LinearConfig {
    pub fn filter_config(&self) -> FilterConfig<Real> {
        FilterConfig {
            alpha: self.alpha,
            beta_base: self.beta,
            beta_rate: self.beta_rate,
            pcbf_quantile: self.pcbf_quantile,
            ..FilterConfig::default()
        }
    }

    pub fn system(&self) -> Result<LinearSystem<Real>, ConfigError> {
        let n = self.initial_state.len();
        if self.process_noise_std.len() != n || self.measurement_noise_std.len() != n {
            return Err(ConfigError::Invalid(
                "noise std vectors must match the state dimension".into(),
            ));
        }
        let a = match &self.a_matrix {
            Some(rows) => matrix_from_rows(rows, n, "a_matrix")?,
            None => DMatrix::identity(n, n),
        };
        let b = match &self.b_matrix {
            Some(rows) => matrix_from_rows(rows, n, "b_matrix")?,
            None => DMatrix::identity(n, n) * self.dt,
        };
        let h = match &self.h_matrix {
            Some(rows) => matrix_from_rows(rows, n, "h_matrix")?,
            None => DMatrix::identity(n, n),
        };
        let process = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            self.process_noise_std.iter().map(|s| s * s),
        ));
        let meas = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            self.measurement_noise_std.iter().map(|s| s * s),
        ));
        LinearSystem::new(a, b, h, process, meas).map_err(invalid)
    }

    pub fn scenario(&self) -> Result<LinearScenario<Real>, ConfigError> {
        let environment = match &self.environment {
            EnvironmentConfig::Facet { normal, offset } => LinearEnvironment::Facet(
                AffineFacet::new(DVector::from_row_slice(normal), *offset).map_err(invalid)?,
            ),
            EnvironmentConfig::Corridor { obstacles, walls } => {
                let obstacles = obstacles
                    .iter()
                    .map(|o| {
                        Obstacle::dodecahedron(
                            &DVector::from_row_slice(&o.center),
                            o.circumradius,
                        )
                    })
                    .collect();
                let walls = walls
                    .iter()
                    .map(|w| AffineFacet::new(DVector::from_row_slice(&w.normal), w.offset))
                    .collect::<Result<_, _>>()
                    .map_err(invalid)?;
                LinearEnvironment::Corridor(
                    CorridorEnvironment::new(obstacles, walls).map_err(invalid)?,
                )
            }
        };
        let nominal = match &self.nominal {
            NominalConfig::OpenLoop { control } => {
                LinearNominal::OpenLoop(DVector::from_row_slice(control))
            }
            NominalConfig::GotoPosition { goal } => {
                LinearNominal::GotoPosition(DVector::from_row_slice(goal))
            }
        };
        let initial_belief = match self.initial_belief {
            InitialBeliefConfig::Exact => InitialBeliefSpec::Exact,
            InitialBeliefConfig::FirstMeasurement => InitialBeliefSpec::FirstMeasurement,
        };
        let goal = self
            .goal
            .as_ref()
            .map(|g| GoalSpec {
                position: DVector::from_row_slice(&g.position),
                radius: g.radius,
            });
        Ok(LinearScenario {
            system: self.system()?,
            environment,
            method: self.method.into(),
            filter: self.filter_config(),
            nominal,
            initial_state: DVector::from_row_slice(&self.initial_state),
            initial_belief,
            horizon: self.horizon,
            mode: self.env_mode.into(),
            goal,
        })
    }
}

impl Se2Config {
    pub fn scenario(&self) -> Result<Se2Scenario<Real>, ConfigError> {
        if self.process_noise_std.len() != 3
            || self.position_noise_std.len() != 2
            || self.nominal_twist.len() != 3
            || self.initial_pose.len() != 3
        {
            return Err(ConfigError::Invalid(
                "se2 vectors must have sizes 3/2/3/3".into(),
            ));
        }
        let p = &self.process_noise_std;
        let m = &self.position_noise_std;
        Ok(Se2Scenario {
            dt: self.dt,
            horizon: self.horizon,
            process_cov: Matrix3::from_diagonal(&Vector3::new(
                p[0] * p[0],
                p[1] * p[1],
                p[2] * p[2],
            )),
            position_noise_cov: Matrix2::from_diagonal(&nalgebra::Vector2::new(
                m[0] * m[0],
                m[1] * m[1],
            )),
            barrier: LaneBarrier {
                offset: self.lane_offset,
            },
            filtered: true,
            filter: FilterConfig {
                alpha: self.alpha,
                beta_base: self.beta,
                beta_rate: self.beta_rate,
                pinned: self.pinned.clone(),
                ..FilterConfig::default()
            },
            nominal_twist: Vector3::new(
                self.nominal_twist[0],
                self.nominal_twist[1],
                self.nominal_twist[2],
            ),
            initial_pose: Se2::from_pose(
                self.initial_pose[0],
                self.initial_pose[1],
                self.initial_pose[2],
            ),
            initial_cov: Matrix3::identity() * self.initial_cov,
        })
    }
}

impl Se3Config {
    pub fn scenario(&self) -> Result<Se3Scenario<Real>, ConfigError> {
        let mut process = Matrix6::<Real>::zeros();
        for i in 0..3 {
            process[(i, i)] = self.rotation_noise_std * self.rotation_noise_std;
            process[(i + 3, i + 3)] = self.translation_noise_std * self.translation_noise_std;
        }
        let slit = SlitBarrier::new(SlitBarrierParams {
            wall_centers: [
                vec3(&self.slit.wall_centers[0], "wall center")?,
                vec3(&self.slit.wall_centers[1], "wall center")?,
            ],
            slit_normal: vec3(&self.slit.slit_normal, "slit normal")?,
            disk_normal: vec3(&self.slit.disk_normal, "disk normal")?,
            disk_radius: self.slit.disk_radius,
            margin: self.slit.margin,
            far_value: self.slit.far_value,
            sharpness: self.slit.sharpness,
            gate_cov: Matrix3::identity() * self.slit.gate_cov,
            gate_offset: match &self.slit.gate_offset {
                Some(v) => vec3(v, "gate offset")?,
                None => Vector3::zeros(),
            },
        })
        .map_err(invalid)?;
        Ok(Se3Scenario {
            dt: self.dt,
            horizon: self.horizon,
            process_cov: process,
            pose_noise_cov: Matrix6::identity() * self.pose_noise_std * self.pose_noise_std,
            barrier: slit,
            filtered: true,
            filter: FilterConfig {
                alpha: self.alpha,
                beta_base: self.beta,
                beta_rate: self.beta_rate,
                curvature: self.curvature,
                ..FilterConfig::default()
            },
            goal_pose: Se3::from_translation(vec3(&self.goal_position, "goal position")?),
            initial_pose: Se3::identity(),
            initial_cov: Matrix6::identity() * self.initial_cov,
        })
    }
}

impl ScenarioConfig {
    pub fn build(&self) -> Result<Scenario<Real>, ConfigError> {
        Ok(match self {
            ScenarioConfig::Linear(c) => Scenario::Linear(c.scenario()?),
            ScenarioConfig::Se2(c) => Scenario::Se2(c.scenario()?),
            ScenarioConfig::Se3(c) => Scenario::Se3(c.scenario()?),
        })
    }
}
