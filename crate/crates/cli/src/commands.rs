use serde_json::{json, Value};
use symplecta::blobs::{self, Rescaling};
use symplecta::capacities::{self, PlanarRegion};
use symplecta::concentration;
use symplecta::linalg::{self, Mat, Vector};
use symplecta::polar::{self, ConvexBody};
use symplecta::states;
use symplecta::symplectic::{self, SymplecticGenerator};
use symplecta::wire::{BlobJson, BodyJson, CovarianceJson, FunctionJson, MatrixJson, PhaseEllipsoidJson, StateJson};
use symplecta::Error;

use crate::{load, sweep, CliError, CliResult, Command, Context, Output};

fn to_value<T: serde::Serialize>(v: &T) -> CliResult<Value> {
    serde_json::to_value(v).map_err(|e| CliError::Input(format!("cannot encode result: {e}")))
}

fn body(arg: &str) -> CliResult<ConvexBody> {
    Ok(load::<BodyJson>(arg)?.to_body()?)
}

fn matrix(arg: &str) -> CliResult<Mat> {
    Ok(load::<MatrixJson>(arg)?.to_matrix()?)
}

fn rows(m: &Mat) -> Value {
    json!(linalg::to_rows(m))
}

/// A number or an array of numbers.
fn half_widths(arg: &str) -> CliResult<Vec<f64>> {
    let v: Value = serde_json::from_str(arg).map_err(|e| CliError::Input(format!("invalid box {arg}: {e}")))?;
    match v {
        Value::Number(x) => Ok(vec![x.as_f64().unwrap_or(f64::NAN)]),
        other => serde_json::from_value(other).map_err(|e| CliError::Input(format!("invalid box {arg}: {e}"))),
    }
}

fn pair_report(x: &ConvexBody, p: &ConvexBody) -> CliResult<polar::QuantumPairReport> {
    let report = polar::quantum_pair_check(x, p)?;
    if !report.holds {
        return Err(Error::NotQuantumPair {
            lambda_max: report.lambda_max,
            witness: report.witness.clone().unwrap_or_default(),
        }
        .into());
    }
    Ok(report)
}

pub(crate) fn dispatch(cmd: &Command, ctx: &Context) -> CliResult<Output> {
    let value = match cmd {
        Command::Dual { body: b } => to_value(&BodyJson::from(&body(b)?.polar_dual()))?,
        Command::Support { body: b, direction } => {
            let u: Vec<f64> = load(direction)?;
            json!({"value": body(b)?.support(&Vector::from_vec(u))?})
        }
        Command::Contains { outer, inner } => to_value(&polar::contains(&body(outer)?, &body(inner)?, ctx.tol)?)?,
        Command::PairCheck { x, p } => to_value(&pair_report(&body(x)?, &body(p)?)?)?,
        Command::Mahler { body: b } => to_value(&polar::mahler_volume(&body(b)?)?)?,
        Command::SymplecticCheck { matrix: m } => to_value(&symplectic::is_symplectic(&matrix(m)?, ctx.tol)?)?,
        Command::Inverse { matrix: m } => {
            let s = load::<MatrixJson>(m)?.to_symplectic(ctx.tol)?;
            to_value(&MatrixJson::from(s.inverse().matrix()))?
        }
        Command::PreIwasawa { matrix: m } => {
            let s = load::<MatrixJson>(m)?.to_symplectic(ctx.tol)?;
            let f = symplectic::pre_iwasawa(&s)?;
            json!({
                "P": rows(&f.p),
                "L": rows(&f.l),
                "R": rows(f.r.matrix()),
                "reconstruction_error": f.reconstruction_error,
                "orthogonality_error": f.orthogonality_error,
                "p_asymmetry": f.p_asymmetry,
            })
        }
        Command::Williamson { matrix: m } => {
            let w = symplectic::williamson(&matrix(m)?)?;
            json!({"S": rows(w.s.matrix()), "spectrum": w.spectrum, "residual": w.residual})
        }
        Command::RandomSymplectic { n, spread } => to_value(&MatrixJson::from(
            symplectic::random_symplectic(ctx.seed, *n, *spread)?.matrix(),
        ))?,
        Command::Blob { matrix: m, blob } => {
            let qb = match (m, blob) {
                (Some(m), _) => {
                    let s = load::<MatrixJson>(m)?.to_symplectic(ctx.tol)?;
                    blobs::blob_from_symplectic(&s, ctx.hbar)?
                }
                (None, Some(b)) => load::<BlobJson>(b)?.to_blob()?,
                (None, None) => return Err(CliError::Input("need --matrix or --blob".into())),
            };
            let nf = blobs::blob_normal_form(&qb)?;
            json!({
                "blob": to_value(&BlobJson::from(&qb))?,
                "normal_form": {"P": rows(&nf.p), "L": rows(&nf.l)},
                "invariants": to_value(&qb.invariant_residuals()?)?,
            })
        }
        Command::BlobProject { blob } => {
            let qb = load::<BlobJson>(blob)?.to_blob()?;
            let pr = blobs::project_blob(&qb, ctx.tol);
            let (x, p) = (ConvexBody::from(pr.x), ConvexBody::from(pr.p));
            let pair = polar::quantum_pair_check(&x, &p)?;
            json!({
                "x": to_value(&BodyJson::from(&x))?,
                "p": to_value(&BodyJson::from(&p))?,
                "saturated": pr.saturated,
                "lambda_max": pair.lambda_max,
            })
        }
        Command::John { x, p, rescale } => john(&body(x)?, &body(p)?, rescale.as_deref())?,
        Command::Gamma { blob, state } => match (blob, state) {
            (Some(b), _) => {
                let s = blobs::blob_to_gaussian(&load::<BlobJson>(b)?.to_blob()?)?;
                to_value(&StateJson::from(&s))?
            }
            (None, Some(s)) => {
                let qb = blobs::gaussian_to_blob(&load::<StateJson>(s)?.to_state()?)?;
                to_value(&BlobJson::from(&qb))?
            }
            (None, None) => return Err(CliError::Input("need --blob or --state".into())),
        },
        Command::StateCheck { state, sigma } => match (state, sigma) {
            (Some(s), _) => {
                let st = load::<StateJson>(s)?.to_state()?;
                let cov = states::covariance(&st);
                let marg = states::marginals(&st);
                json!({
                    "wigner": rows(&states::wigner_matrix(&st)),
                    "covariance": to_value(&CovarianceJson::from(&cov))?,
                    "marginals": {
                        "position_covariance": rows(&marg.position_covariance),
                        "momentum_covariance": rows(&marg.momentum_covariance),
                    },
                    "verdict": to_value(&states::quantum_condition_check(&cov, ctx.tol)?)?,
                })
            }
            (None, Some(c)) => {
                let cov = load::<CovarianceJson>(c)?.to_covariance()?;
                json!({"verdict": to_value(&states::quantum_condition_check(&cov, ctx.tol)?)?})
            }
            (None, None) => return Err(CliError::Input("need --state or --sigma".into())),
        },
        Command::Metaplectic { state, generator } => {
            let st = load::<StateJson>(state)?.to_state()?;
            let g: SymplecticGenerator = load(generator)?;
            to_value(&StateJson::from(&states::metaplectic_apply(&st, &g)?))?
        }
        Command::RsCheck { sigma } => {
            let cov = load::<CovarianceJson>(sigma)?.to_covariance()?;
            let margins = states::robertson_schrodinger_check(&cov);
            let passes = margins.iter().all(|&m| m >= -ctx.tol);
            json!({"margins": margins, "passes": passes})
        }
        Command::Pauli { sxx, spp } => {
            let partners = states::pauli_partners(*sxx, *spp, ctx.hbar, ctx.tol)?;
            let list: Vec<CovarianceJson> = partners.iter().map(CovarianceJson::from).collect();
            json!({"partners": to_value(&list)?})
        }
        Command::Capacity {
            ellipsoid,
            polygon,
            planar,
        } => {
            let c = match (ellipsoid, polygon) {
                (Some(e), _) => {
                    let e = load::<PhaseEllipsoidJson>(e)?.to_ellipsoid()?;
                    if *planar {
                        let hbar = e.hbar();
                        capacities::hz_planar(&PlanarRegion::Ellipse(e), hbar)?
                    } else {
                        capacities::ellipsoid_capacity(&e)?
                    }
                }
                (None, Some(v)) => {
                    let pts: Vec<Vec<f64>> = load(v)?;
                    let pts = pts.iter().map(|r| Vector::from_column_slice(r)).collect();
                    capacities::hz_planar(&PlanarRegion::Polygon(pts), ctx.hbar)?
                }
                (None, None) => return Err(CliError::Input("need --ellipsoid or --polygon".into())),
            };
            to_value(&c)?
        }
        Command::HzPair { x, p } => {
            let (x, p) = (body(x)?, body(p)?);
            let c = capacities::hz_product_pair(&x, &p)?;
            let mut v = to_value(&c)?;
            if x.dim() == 1 {
                let rect = capacities::product_rectangle(&x, &p)?;
                v["planar_area"] = json!(capacities::hz_planar(&rect, x.hbar())?.value);
            }
            v
        }
        Command::GromovCheck {
            matrix: m,
            radius,
            plane,
        } => {
            let s = load::<MatrixJson>(m)?.to_symplectic(ctx.tol)?;
            to_value(&capacities::projection_area_check(&s, *radius, *plane, ctx.tol)?)?
        }
        Command::DsCheck {
            function,
            eps_x,
            eps_p,
            cx,
            cp,
        } => {
            let (cx, cp) = (half_widths(cx)?, half_widths(cp)?);
            match function {
                Some(f) => {
                    if cx.len() != 1 || cp.len() != 1 {
                        return Err(CliError::Input("measured check needs one-dimensional boxes".into()));
                    }
                    let f = load::<FunctionJson>(f)?.to_function()?;
                    to_value(&concentration::concentration_report(&f, cx[0], cp[0], ctx.tol)?)?
                }
                None => {
                    let (ex, ep) = (eps_x.unwrap_or(0.0), eps_p.unwrap_or(0.0));
                    to_value(&concentration::donoho_stark_check(ex, ep, &cx, &cp, ctx.hbar, ctx.tol)?)?
                }
            }
        }
        Command::PolarBound { n, eps_x, eps_p } => to_value(&concentration::polar_concentration_bound(
            *n, ctx.hbar, *eps_x, *eps_p, ctx.tol,
        )?)?,
        Command::Fourier { function } => {
            let f = load::<FunctionJson>(function)?.to_function()?;
            to_value(&FunctionJson::from(&concentration::hbar_fourier(&f)?))?
        }
        Command::Concentration { function, a } => {
            let f = load::<FunctionJson>(function)?.to_function()?;
            json!({"eps": concentration::concentration(&f, *a)?})
        }
        Command::HardyCheck { a, b } => to_value(&concentration::hardy_check(&matrix(a)?, &matrix(b)?, ctx.hbar)?)?,
        Command::Sweep { suite, seeds } => {
            let seeds = sweep::parse_seeds(seeds)?;
            let rows = sweep::run_suite(*suite, &seeds, ctx)?;
            return match ctx.format {
                crate::Format::Csv => Ok(Output::Csv(sweep::to_csv(&rows)?)),
                crate::Format::Json => Ok(Output::Json(to_value(&rows)?)),
            };
        }
    };
    Ok(Output::Json(value))
}

fn john(x: &ConvexBody, p: &ConvexBody, rescale: Option<&str>) -> CliResult<Value> {
    match (x, p) {
        (ConvexBody::Ellipsoid(xe), ConvexBody::Ellipsoid(pe)) => match rescale {
            None => {
                let j = blobs::john_of_pair(xe, pe)?;
                Ok(json!({
                    "ellipsoid": to_value(&PhaseEllipsoidJson::from(&j.ellipsoid))?,
                    "is_blob": j.is_blob,
                    "projection_error": j.projection_error,
                }))
            }
            Some(choice) => {
                let choice = match choice {
                    "ab" => Rescaling::Ab,
                    s => Rescaling::Lambda(
                        s.parse()
                            .map_err(|_| CliError::Input(format!("--rescale takes `ab` or a number, got {s}")))?,
                    ),
                };
                let b = pe.q() * (xe.hbar() / pe.hbar());
                let r = blobs::rescaled_blob_family(xe.q(), &b, choice, xe.hbar())?;
                Ok(json!({
                    "blob": to_value(&BlobJson::from(&r.blob))?,
                    "contained": r.contained,
                    "margin": r.margin,
                    "lambda_max": r.lambda_max,
                }))
            }
        },
        (ConvexBody::Polytope(xp), ConvexBody::Polytope(pp)) => {
            if rescale.is_some() {
                return Err(CliError::Input("--rescale needs ellipsoid factors".into()));
            }
            let j = blobs::john_of_polytope_product(xp, pp)?;
            Ok(json!({
                "ellipsoid": to_value(&PhaseEllipsoidJson::from(&j.ellipsoid))?,
                "iterations": j.iterations,
                "gap": j.gap,
            }))
        }
        _ => Err(CliError::Input("john needs two ellipsoids or two polytopes".into())),
    }
}
