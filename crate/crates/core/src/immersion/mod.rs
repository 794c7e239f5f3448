//! Discretised closed Legendrian submanifolds and their fundamental forms.
//!
//! An immersion is a periodic grid of chart points, curves (n = 1) on N
//! nodes and tori (n = 2) on N1 x N2 nodes, differentiated spectrally.
//! Angular chart coordinates that wind around the grid (the phi coordinate
//! of hyperbolic-cylinder lifts) carry an integer winding number so that the
//! detrended coordinate series stays periodic.
//!
//! Sign conventions for the second fundamental data:
//!   A_ij = d_i d_j F + Gamma_amb(F_i, F_j) - Gamma^k_{ij} F_k,
//!   h_ijk = -omega(F_k, A_ij),
//!   H_j = g^{ik} h_{ijk},
//! which together make the classical mean curvature vector equal to
//! -H^k v_k and the volume element satisfy d(dmu)/dt = -|H|^2 dmu along the
//! flow.

mod constraint;
mod deform;
mod families;

pub use constraint::{project_legendrian, ProjectionOutcome};
pub use deform::{legendrian_deform, DeformationField};
pub use families::{build_immersion, FamilySpec, PotentialSpec};

use crate::ambient::SasakianModel;
use crate::error::{Error, Result};
use crate::fft::{GridFft, GridShape};
use crate::tensor::T2;
use serde::{Deserialize, Serialize};

/// A closed Legendrian immersion with cached fundamental data.
#[derive(Clone)]
pub struct DiscreteLegendrian {
    pub model: SasakianModel,
    pub shape: GridShape,
    /// Node-major chart coordinates, nn x chart_dim. Winding coordinates are
    /// stored unwrapped (continuous along the grid).
    pub positions: Vec<f64>,
    /// winding[coord * axes + axis]: how often chart coordinate `coord`
    /// wraps its period when the grid axis `axis` is traversed once.
    pub winding: Vec<i64>,
    pub fft: GridFft,
    pub first: FirstFundamental,
    pub second: SecondFundamentalData,
}

/// Tangent/metric cache.
#[derive(Debug, Clone, Default)]
pub struct FirstFundamental {
    /// tangents[axis][node * D + alpha] = F_axis^alpha
    pub tangents: Vec<Vec<f64>>,
    /// v[axis] = J F_axis, the Legendrian normal frame
    pub v: Vec<Vec<f64>>,
    /// Reeb field along the immersion, node * D
    pub reeb: Vec<f64>,
    /// contact form along the immersion, node * D
    pub lambda: Vec<f64>,
    /// induced metric, node * n * n
    pub metric: Vec<f64>,
    pub metric_inv: Vec<f64>,
    pub sqrt_det: Vec<f64>,
    /// volume element per node (sqrt_det times the grid weight)
    pub dmu: Vec<f64>,
    pub vol: f64,
    /// lambda(F_axis) per node and axis, node * n
    pub leg_residual: Vec<f64>,
    pub max_leg_residual: f64,
    /// smallest grid spacing measured in the induced metric
    pub h_min: f64,
}

/// Second fundamental tensor and derived curvature data.
#[derive(Debug, Clone, Default)]
pub struct SecondFundamentalData {
    /// A_{ij}^alpha, node * n * n * D
    pub a: Vec<f64>,
    /// h_{ijk}, node * n^3
    pub h: Vec<f64>,
    /// induced Christoffels Gamma^k_{ij}, node * n^3
    pub gamma_ind: Vec<f64>,
    /// H_j = g^{ik} h_{ijk}, node * n
    pub mean_form: Vec<f64>,
    /// |A|^2 = |h|^2 per node
    pub norm_a_sq: Vec<f64>,
    /// |H|^2 per node
    pub norm_h_sq: Vec<f64>,
    pub max_h: f64,
    pub max_a_sq: f64,
    pub h_sym_residual: f64,
    pub lambda_a_residual: f64,
}

impl std::fmt::Debug for DiscreteLegendrian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiscreteLegendrian")
            .field("model", &self.model.kind)
            .field("shape", &self.shape)
            .field("vol", &self.first.vol)
            .field("max_leg_residual", &self.first.max_leg_residual)
            .field("max_h", &self.second.max_h)
            .finish()
    }
}

impl DiscreteLegendrian {
    /// Assembles an immersion from raw positions, building the caches.
    pub fn from_positions(
        model: SasakianModel,
        shape: GridShape,
        positions: Vec<f64>,
        winding: Vec<i64>,
    ) -> Result<DiscreteLegendrian> {
        let fft = GridFft::new(shape);
        let first = first_fundamental(&model, shape, &positions, &winding, &fft)?;
        let second = second_fundamental(&model, shape, &positions, &winding, &fft, &first)?;
        Ok(DiscreteLegendrian {
            model,
            shape,
            positions,
            winding,
            fft,
            first,
            second,
        })
    }

    /// Rebuilds the caches after positions changed.
    pub fn refresh(&mut self) -> Result<()> {
        self.first =
            first_fundamental(&self.model, self.shape, &self.positions, &self.winding, &self.fft)?;
        self.second = second_fundamental(
            &self.model,
            self.shape,
            &self.positions,
            &self.winding,
            &self.fft,
            &self.first,
        )?;
        Ok(())
    }

    pub fn node_count(&self) -> usize {
        self.shape.node_count()
    }

    pub fn dim(&self) -> usize {
        self.shape.dim()
    }

    pub fn chart_dim(&self) -> usize {
        self.model.chart_dim
    }

    /// Tolerance on the Legendrian residual for this grid dimension.
    pub fn legendrian_tol(&self) -> f64 {
        match self.shape {
            GridShape::Curve { .. } => crate::tolerances::LEGENDRIAN_TOL_CURVE,
            GridShape::Torus { .. } => crate::tolerances::LEGENDRIAN_TOL_TORUS,
        }
    }

    /// Spectral derivative of the position field along a grid axis,
    /// winding-corrected.
    pub fn position_derivative(&self, axis: usize) -> Vec<f64> {
        position_derivative(self.shape, &self.positions, &self.winding, &self.fft, axis)
    }

    /// Integral of a nodal scalar against the volume element.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        f.iter().zip(&self.first.dmu).map(|(a, b)| a * b).sum()
    }

    /// L2 norm squared of a nodal 1-form w_a (node * n layout).
    pub fn one_form_l2_sq(&self, w: &[f64]) -> f64 {
        let n = self.dim();
        let nn = self.node_count();
        let mut acc = 0.0;
        for node in 0..nn {
            let gi = &self.first.metric_inv[node * n * n..(node + 1) * n * n];
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += gi[a * n + b] * w[node * n + a] * w[node * n + b];
                }
            }
            acc += s * self.first.dmu[node];
        }
        acc
    }

    /// Pointwise |w|^2 of a nodal 1-form.
    pub fn one_form_norm_sq(&self, w: &[f64], node: usize) -> f64 {
        let n = self.dim();
        let gi = &self.first.metric_inv[node * n * n..(node + 1) * n * n];
        let mut s = 0.0;
        for a in 0..n {
            for b in 0..n {
                s += gi[a * n + b] * w[node * n + a] * w[node * n + b];
            }
        }
        s
    }
}

/// Detrended spectral derivative: winding coordinates get their linear part
/// removed before differentiation and its slope added back.
pub(crate) fn position_derivative(
    shape: GridShape,
    positions: &[f64],
    winding: &[i64],
    fft: &GridFft,
    axis: usize,
) -> Vec<f64> {
    let nn = shape.node_count();
    let dchart = positions.len() / nn;
    let axes = shape.dim();
    let mut out = vec![0.0; positions.len()];
    let mut series = vec![0.0; nn];
    for c in 0..dchart {
        let w = winding[c * axes + axis];
        if w == 0 {
            for node in 0..nn {
                series[node] = positions[node * dchart + c];
            }
            let d = fft.deriv(&series, axis);
            for node in 0..nn {
                out[node * dchart + c] = d[node];
            }
        } else {
            let wf = w as f64;
            for node in 0..nn {
                let th = shape.coords(node)[axis];
                series[node] = positions[node * dchart + c] - wf * th;
            }
            let d = fft.deriv(&series, axis);
            for node in 0..nn {
                out[node * dchart + c] = d[node] + wf;
            }
        }
    }
    out
}

/// Detrended second derivative of the position field.
pub(crate) fn position_second_derivative(
    shape: GridShape,
    positions: &[f64],
    winding: &[i64],
    fft: &GridFft,
    a: usize,
    b: usize,
) -> Vec<f64> {
    let nn = shape.node_count();
    let dchart = positions.len() / nn;
    let axes = shape.dim();
    let mut out = vec![0.0; positions.len()];
    let mut series = vec![0.0; nn];
    for c in 0..dchart {
        for node in 0..nn {
            let mut v = positions[node * dchart + c];
            let coords = shape.coords(node);
            for ax in 0..axes {
                let w = winding[c * axes + ax];
                if w != 0 {
                    v -= w as f64 * coords[ax];
                }
            }
            series[node] = v;
        }
        let d = fft.deriv2(&series, a, b);
        for node in 0..nn {
            out[node * dchart + c] = d[node];
        }
    }
    out
}

/// First fundamental data from positions.
pub fn first_fundamental(
    model: &SasakianModel,
    shape: GridShape,
    positions: &[f64],
    winding: &[i64],
    fft: &GridFft,
) -> Result<FirstFundamental> {
    let nn = shape.node_count();
    let n = shape.dim();
    let dchart = model.chart_dim;
    let weight = shape.node_weight();

    let tangents: Vec<Vec<f64>> = (0..n)
        .map(|axis| position_derivative(shape, positions, winding, fft, axis))
        .collect();

    let mut v = vec![vec![0.0; nn * dchart]; n];
    let mut reeb = vec![0.0; nn * dchart];
    let mut lambda = vec![0.0; nn * dchart];
    let mut metric = vec![0.0; nn * n * n];
    let mut metric_inv = vec![0.0; nn * n * n];
    let mut sqrt_det = vec![0.0; nn];
    let mut dmu = vec![0.0; nn];
    let mut leg_residual = vec![0.0; nn * n];
    let mut max_leg = 0.0f64;
    let mut vol = 0.0;
    let mut h_min = f64::INFINITY;

    let mut point = vec![0.0; dchart];
    for node in 0..nn {
        point.copy_from_slice(&positions[node * dchart..(node + 1) * dchart]);
        model.retract(&mut point);
        let f = model.frame_eval(&point);
        reeb[node * dchart..(node + 1) * dchart].copy_from_slice(&f.reeb);
        lambda[node * dchart..(node + 1) * dchart].copy_from_slice(&f.lambda);

        // v_k = J F_k and the Legendrian residual lambda(F_k)
        for k in 0..n {
            let t = &tangents[k][node * dchart..(node + 1) * dchart];
            let mut lr = 0.0;
            for al in 0..dchart {
                lr += f.lambda[al] * t[al];
            }
            leg_residual[node * n + k] = lr;
            max_leg = max_leg.max(lr.abs());
            for be in 0..dchart {
                let mut s = 0.0;
                for al in 0..dchart {
                    s += f.j.get(be, al) * t[al];
                }
                v[k][node * dchart + be] = s;
            }
        }

        // induced metric
        let mut gmat = T2::zeros(n);
        for a in 0..n {
            for b in 0..n {
                let ta = &tangents[a][node * dchart..(node + 1) * dchart];
                let tb = &tangents[b][node * dchart..(node + 1) * dchart];
                let mut s = 0.0;
                for al in 0..dchart {
                    for bet in 0..dchart {
                        s += f.g.get(al, bet) * ta[al] * tb[bet];
                    }
                }
                gmat.set(a, b, s);
            }
        }
        let det = gmat.det();
        if !(det > 1e-14) {
            return Err(Error::DegenerateMetric { node, det });
        }
        let ginv = gmat.inverse();
        for a in 0..n {
            for b in 0..n {
                metric[node * n * n + a * n + b] = gmat.get(a, b);
                metric_inv[node * n * n + a * n + b] = ginv.get(a, b);
            }
        }
        let sd = det.sqrt();
        sqrt_det[node] = sd;
        dmu[node] = sd * weight;
        vol += dmu[node];
        for a in 0..n {
            let spacing =
                gmat.get(a, a).sqrt() * std::f64::consts::TAU / shape.axis_len(a) as f64;
            h_min = h_min.min(spacing);
        }
    }

    Ok(FirstFundamental {
        tangents,
        v,
        reeb,
        lambda,
        metric,
        metric_inv,
        sqrt_det,
        dmu,
        vol,
        leg_residual,
        max_leg_residual: max_leg,
        h_min,
    })
}

/// Second fundamental tensor, scalar second fundamental form and mean
/// curvature form.
pub fn second_fundamental(
    model: &SasakianModel,
    shape: GridShape,
    positions: &[f64],
    winding: &[i64],
    fft: &GridFft,
    first: &FirstFundamental,
) -> Result<SecondFundamentalData> {
    let nn = shape.node_count();
    let n = shape.dim();
    let dchart = model.chart_dim;

    // spectral derivatives of the induced metric field for the induced
    // Christoffels
    let mut dmetric = vec![vec![0.0; nn * n * n]; n];
    {
        let mut series = vec![0.0; nn];
        for a in 0..n {
            for b in 0..n {
                for node in 0..nn {
                    series[node] = first.metric[node * n * n + a * n + b];
                }
                for s in 0..n {
                    let d = fft.deriv(&series, s);
                    for node in 0..nn {
                        dmetric[s][node * n * n + a * n + b] = d[node];
                    }
                }
            }
        }
    }

    // second position derivatives
    let mut d2pos = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            d2pos.push(position_second_derivative(shape, positions, winding, fft, a, b));
        }
    }

    let mut a_t = vec![0.0; nn * n * n * dchart];
    let mut h_t = vec![0.0; nn * n * n * n];
    let mut gamma_ind = vec![0.0; nn * n * n * n];
    let mut mean_form = vec![0.0; nn * n];
    let mut norm_a_sq = vec![0.0; nn];
    let mut norm_h_sq = vec![0.0; nn];
    let mut max_h = 0.0f64;
    let mut max_a_sq = 0.0f64;
    let mut h_sym = 0.0f64;
    let mut lam_a = 0.0f64;

    let mut point = vec![0.0; dchart];
    for node in 0..nn {
        point.copy_from_slice(&positions[node * dchart..(node + 1) * dchart]);
        model.retract(&mut point);
        let f = model.frame_eval(&point);
        let gamma_amb = model.connection_eval(&point);
        let gi = &first.metric_inv[node * n * n..(node + 1) * n * n];

        // induced Christoffels
        for k in 0..n {
            for a in 0..n {
                for b in 0..n {
                    let mut s = 0.0;
                    for l in 0..n {
                        s += gi[k * n + l]
                            * (dmetric[a][node * n * n + l * n + b]
                                + dmetric[b][node * n * n + l * n + a]
                                - dmetric[l][node * n * n + a * n + b]);
                    }
                    gamma_ind[node * n * n * n + (k * n + a) * n + b] = 0.5 * s;
                }
            }
        }

        // A_{ab} = d2 F + Gamma_amb(F_a, F_b) - Gamma^k_{ab} F_k
        for a in 0..n {
            for b in 0..n {
                let base = node * n * n * dchart + (a * n + b) * dchart;
                let ta = &first.tangents[a][node * dchart..(node + 1) * dchart];
                let tb = &first.tangents[b][node * dchart..(node + 1) * dchart];
                for al in 0..dchart {
                    let mut s = d2pos[a * n + b][node * dchart + al];
                    for be in 0..dchart {
                        for ga in 0..dchart {
                            s += gamma_amb.get(al, be, ga) * ta[be] * tb[ga];
                        }
                    }
                    for k in 0..n {
                        s -= gamma_ind[node * n * n * n + (k * n + a) * n + b]
                            * first.tangents[k][node * dchart + al];
                    }
                    a_t[base + al] = s;
                }
                // Reeb-orthogonality residual
                let mut lr = 0.0;
                for al in 0..dchart {
                    lr += f.lambda[al] * a_t[base + al];
                }
                lam_a = lam_a.max(lr.abs());
            }
        }

        // h_{abc} = -omega(F_c, A_{ab})
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let abase = node * n * n * dchart + (a * n + b) * dchart;
                    let tc = &first.tangents[c][node * dchart..(node + 1) * dchart];
                    let mut s = 0.0;
                    for al in 0..dchart {
                        for be in 0..dchart {
                            s -= f.omega.get(al, be) * tc[al] * a_t[abase + be];
                        }
                    }
                    h_t[node * n * n * n + (a * n + b) * n + c] = s;
                }
            }
        }

        // symmetry residual of h over all permutations
        {
            let hval = |i: usize, j: usize, k: usize| h_t[node * n * n * n + (i * n + j) * n + k];
            for i in 0..n {
                for j in 0..n {
                    for k in 0..n {
                        let r = hval(i, j, k);
                        h_sym = h_sym.max((r - hval(i, k, j)).abs());
                        h_sym = h_sym.max((r - hval(j, i, k)).abs());
                        h_sym = h_sym.max((r - hval(k, j, i)).abs());
                    }
                }
            }
        }

        // H_c = g^{ab} h_{abc}; norms
        let mut hsq = 0.0;
        for c in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += gi[a * n + b] * h_t[node * n * n * n + (a * n + b) * n + c];
                }
            }
            mean_form[node * n + c] = s;
        }
        for a in 0..n {
            for b in 0..n {
                hsq += gi[a * n + b] * mean_form[node * n + a] * mean_form[node * n + b];
            }
        }
        norm_h_sq[node] = hsq;
        max_h = max_h.max(hsq.sqrt());

        let mut asq = 0.0;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for i2 in 0..n {
                        for j2 in 0..n {
                            for k2 in 0..n {
                                asq += gi[i * n + i2]
                                    * gi[j * n + j2]
                                    * gi[k * n + k2]
                                    * h_t[node * n * n * n + (i * n + j) * n + k]
                                    * h_t[node * n * n * n + (i2 * n + j2) * n + k2];
                            }
                        }
                    }
                }
            }
        }
        norm_a_sq[node] = asq;
        max_a_sq = max_a_sq.max(asq);
    }

    Ok(SecondFundamentalData {
        a: a_t,
        h: h_t,
        gamma_ind,
        mean_form,
        norm_a_sq,
        norm_h_sq,
        max_h,
        max_a_sq,
        h_sym_residual: h_sym,
        lambda_a_residual: lam_a,
    })
}

/// Serialisable immersion snapshot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ImmersionDto {
    pub model: String,
    pub grid: GridShape,
    /// row-major node coordinates
    pub positions: Vec<f64>,
    pub winding: Vec<i64>,
    #[serde(default)]
    pub metadata: serde_json::Map<String, serde_json::Value>,
}

impl DiscreteLegendrian {
    pub fn to_dto(&self) -> ImmersionDto {
        ImmersionDto {
            model: self.model.kind.id().to_string(),
            grid: self.shape,
            positions: self.positions.clone(),
            winding: self.winding.clone(),
            metadata: serde_json::Map::new(),
        }
    }

    pub fn from_dto(dto: &ImmersionDto) -> Result<DiscreteLegendrian> {
        let model = SasakianModel::from_id(&dto.model)?;
        DiscreteLegendrian::from_positions(
            model,
            dto.grid,
            dto.positions.clone(),
            dto.winding.clone(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("immersion serialises")
    }

    pub fn from_json(s: &str) -> Result<DiscreteLegendrian> {
        let dto: ImmersionDto = serde_json::from_str(s).map_err(|e| Error::Schema {
            path: "immersion".into(),
            message: e.to_string(),
        })?;
        DiscreteLegendrian::from_dto(&dto)
    }

    /// Per-node field export: node index, grid coordinates, |H|, |A|^2, dmu.
    pub fn per_node_csv(&self) -> String {
        let mut out = String::from("node,u,v,abs_H,norm_A_sq,dmu\n");
        for node in 0..self.node_count() {
            let [u, vv] = self.shape.coords(node);
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                node,
                u,
                vv,
                self.second.norm_h_sq[node].sqrt(),
                self.second.norm_a_sq[node],
                self.first.dmu[node]
            ));
        }
        out
    }
}
