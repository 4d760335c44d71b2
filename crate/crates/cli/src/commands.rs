use std::f64::consts::TAU;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::json;
use tetra_core::domains::{
    in_cartan, in_symmetrized_bidisc, in_tetrablock, in_tetrablock_alt, rho, CartanKind,
    MembershipReport,
};
use tetra_core::kernel::Branch;
use tetra_core::left_inverse::{left_inverse_for, left_inverse_nontriangular, verify_left_inverse};
use tetra_core::lifting::{detect_orders, lift_avoiding_t, lift_through_t_origin, LiftResult};
use tetra_core::transforms::{aut_tetrablock, nu_factor};
use tetra_core::verifier::{equality_suite, find_nonconvexity_witness, invariance_suite, psh_suite};
use tetra_core::{Complex64, DiscMap, Error, GeodesicSpec, Mat2, Point3, TetraAutParams, Tolerances};

use crate::output::{cnum, num, Format, Sink};
use crate::parse::{complex, complexes};
use crate::{BranchArg, Cli, Command, Domain, Suite, EXIT_INPUT};

pub struct CliError {
    pub code: u8,
    pub message: String,
}

fn input(message: impl Into<String>) -> CliError {
    CliError { code: EXIT_INPUT, message: message.into() }
}

fn failure(e: Error) -> CliError {
    CliError { code: 1, message: e.to_string() }
}

type Outcome = Result<u8, CliError>;

const GOLDEN: f64 = 0.618_033_988_749_894_9;
const GEODESIC_RADIUS: f64 = 0.95;

pub fn run(cli: &Cli, tol: &Tolerances) -> Outcome {
    let g = &cli.global;
    let mut sink = Sink::default();
    let fmt = g.format.unwrap_or(match cli.command {
        Command::Geodesic { .. } => Format::Csv,
        _ => Format::Json,
    });
    let code = match &cli.command {
        Command::Member { domain, values } => member(*domain, values, tol, fmt, &mut sink)?,
        Command::Rho { point } => {
            let z = point3(point)?;
            let r = rho(&z);
            match fmt {
                Format::Json => sink.json(&json!({ "rho": r, "inside": r < 1.0 })),
                Format::Csv => {
                    sink.line("rho,inside");
                    sink.line(&format!("{},{}", num(r), r < 1.0));
                }
            }
            0
        }
        Command::Aut { a1, a2, theta, eta, swap, point } => {
            let p = TetraAutParams::new(complex(a1).map_err(input)?, complex(a2).map_err(input)?, *theta, *eta, *swap)
                .map_err(|e| input(e.to_string()))?;
            let z = point3(point)?;
            let image = aut_tetrablock(&p, &z, tol).map_err(failure)?;
            let factor = nu_factor(&p, &z, tol).map_err(failure)?;
            match fmt {
                Format::Json => sink.json(&json!({ "params": p, "point": z, "image": image, "nu_factor": factor })),
                Format::Csv => {
                    sink.line("z1_re,z1_im,z2_re,z2_im,z3_re,z3_im,nu_re,nu_im");
                    sink.line(&format!("{},{},{},{}", cnum(image.z1), cnum(image.z2), cnum(image.z3), cnum(factor)));
                }
            }
            0
        }
        Command::Geodesic { spec } => {
            let spec = read_spec(spec, tol)?;
            geodesic(&spec, g.samples.unwrap_or(16), tol, fmt, &mut sink)?
        }
        Command::Leftinv { spec } => {
            let spec = read_spec(spec, tol)?;
            leftinv(&spec, g.samples.unwrap_or(64), tol, fmt, &mut sink)?
        }
        Command::Lift { spec, disc, orders, branch } => {
            let f = match (spec, disc) {
                (_, Some(d)) => {
                    let text = read_text(d)?;
                    serde_json::from_str::<DiscMap>(&text).map_err(|e| input(format!("invalid disc: {e}")))?
                }
                (Some(s), None) => read_spec(s, tol)?.disc(tol).map_err(failure)?,
                (None, None) => return Err(input("lift needs a spec or --disc")),
            };
            let orders = orders.as_deref().map(parse_orders).transpose()?;
            let branch = match branch {
                BranchArg::Plus => Branch::Plus,
                BranchArg::Minus => Branch::Minus,
            };
            lift(&f, orders, branch, tol, fmt, &mut sink)?
        }
        Command::Verify { suite, n, budget } => verify(*suite, *n, *budget, g.seed, tol, fmt, &mut sink),
        Command::Witness { budget } => {
            let w = find_nonconvexity_witness(g.seed, *budget);
            witness_out(&w, fmt, &mut sink);
            0
        }
    };
    sink.finish(g.out.as_deref())
        .map_err(|e| CliError { code: 1, message: format!("writing output: {e}") })?;
    Ok(code)
}

fn point3(items: &[String]) -> Result<Point3, CliError> {
    let v = complexes(items, 3, "a point of C^3").map_err(input)?;
    Ok(Point3::new(v[0], v[1], v[2]))
}

fn read_text(arg: &str) -> Result<String, CliError> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(arg).map_err(|e| input(format!("reading {arg}: {e}")))
}

fn read_spec(arg: &str, tol: &Tolerances) -> Result<GeodesicSpec, CliError> {
    let text = read_text(arg)?;
    let spec: GeodesicSpec = serde_json::from_str(&text).map_err(|e| input(format!("invalid spec: {e}")))?;
    spec.validate(tol).map_err(|e| input(format!("invalid spec: {e}")))?;
    Ok(spec)
}

fn parse_orders(s: &str) -> Result<(u32, u32), CliError> {
    let (n, m) = s.split_once(',').ok_or_else(|| input("--orders expects n,m"))?;
    let p = |x: &str| x.trim().parse::<u32>().map_err(|_| input(format!("`{x}` is not an order")));
    Ok((p(n)?, p(m)?))
}

fn member(domain: Domain, values: &[String], tol: &Tolerances, format: Format, sink: &mut Sink) -> Outcome {
    let report: MembershipReport = match domain {
        Domain::Tetrablock => in_tetrablock(&point3(values)?),
        Domain::TetrablockAlt => in_tetrablock_alt(&point3(values)?),
        Domain::G2 => {
            let v = complexes(values, 2, "a point (s, p)").map_err(input)?;
            in_symmetrized_bidisc(v[0], v[1])
        }
        Domain::CartanI | Domain::CartanIi => {
            let v = complexes(values, 4, "a 2x2 matrix").map_err(input)?;
            let kind = if domain == Domain::CartanI { CartanKind::I } else { CartanKind::II };
            in_cartan(&Mat2::new(v[0], v[1], v[2], v[3]), kind, tol.sym)
        }
    };
    let boundary = report.on_boundary(tol.boundary);
    let name = domain.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    match format {
        Format::Json => sink.json(&json!({
            "domain": name,
            "inside": report.inside,
            "margin": report.margin,
            "boundary": boundary,
        })),
        Format::Csv => {
            sink.line("domain,inside,margin,boundary");
            sink.line(&format!("{name},{},{},{boundary}", report.inside, num(report.margin)));
        }
    }
    Ok(if report.inside { 0 } else { 1 })
}

/// `lambda_k = 0.95 (k/N) e^{2 pi i k g}` with `g` the golden ratio conjugate; `lambda_0 = 0`.
pub fn geodesic_samples(n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| Complex64::from_polar(GEODESIC_RADIUS * k as f64 / n as f64, TAU * (k as f64 * GOLDEN).fract()))
        .collect()
}

fn geodesic(spec: &GeodesicSpec, n: usize, tol: &Tolerances, format: Format, sink: &mut Sink) -> Outcome {
    if format == Format::Csv {
        sink.line("k,lambda_re,lambda_im,z1_re,z1_im,z2_re,z2_im,z3_re,z3_im,margin");
    }
    let mut all_inside = true;
    for (k, l) in geodesic_samples(n).into_iter().enumerate() {
        let p = spec.eval(l, tol).map_err(failure)?;
        let margin = in_tetrablock(&p).margin;
        all_inside &= margin > 0.0;
        match format {
            Format::Json => sink.json(&json!({ "k": k, "lambda": l, "point": p, "margin": margin })),
            Format::Csv => sink.line(&format!(
                "{k},{},{},{},{},{}",
                cnum(l),
                cnum(p.z1),
                cnum(p.z2),
                cnum(p.z3),
                num(margin)
            )),
        }
    }
    Ok(if all_inside { 0 } else { 1 })
}

fn leftinv(spec: &GeodesicSpec, n: usize, tol: &Tolerances, format: Format, sink: &mut Sink) -> Outcome {
    let l = left_inverse_for(spec, tol).map_err(failure)?;
    let residual = verify_left_inverse(|x| spec.eval(x, tol), |p| l.eval(p, tol), n);
    let certificate = match spec {
        GeodesicSpec::NonTriangular(s) => left_inverse_nontriangular(s, tol).ok().map(|c| {
            json!({ "h0": c.h0, "h1": c.h1, "schwarz_pick_defect": c.schwarz_pick_defect })
        }),
        _ => None,
    };
    let ok = residual <= 1e-8;
    match format {
        Format::Json => sink.json(&json!({
            "left_inverse": l,
            "residual": residual,
            "samples": n,
            "certificate": certificate,
            "pass": ok,
        })),
        Format::Csv => {
            sink.line("kind,residual,samples,pass");
            sink.line(&format!("{},{},{n},{ok}", spec.kind(), num(residual)));
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn lift(
    f: &DiscMap,
    orders: Option<(u32, u32)>,
    branch: Branch,
    tol: &Tolerances,
    format: Format,
    sink: &mut Sink,
) -> Outcome {
    let (method, result): (&str, LiftResult) = match orders {
        Some((n, m)) => ("through_origin", lift_through_t_origin(f, n, m, branch, tol).map_err(failure)?),
        None => match lift_avoiding_t(f, branch, tol) {
            Ok(r) => ("avoiding", r),
            Err(Error::Precondition(_)) => {
                let (n, m) = detect_orders(f, tol).map_err(failure)?;
                ("through_origin", lift_through_t_origin(f, n, m, branch, tol).map_err(failure)?)
            }
            Err(e) => return Err(failure(e)),
        },
    };
    let (n, m) = result.disc.orders();
    let c = result.certificate;
    let ok = c.projection_residual <= 1e-10 && c.max_norm <= 1.0 + 1e-9;
    match format {
        Format::Json => sink.json(&json!({
            "method": method,
            "n": n,
            "m": m,
            "certificate": c,
            "value_at_origin": result.disc.eval(Complex64::new(0.0, 0.0)),
            "pass": ok,
        })),
        Format::Csv => {
            sink.line("method,n,m,projection_residual,max_norm,max_interior_norm,samples,pass");
            sink.line(&format!(
                "{method},{n},{m},{},{},{},{},{ok}",
                num(c.projection_residual),
                num(c.max_norm),
                num(c.max_interior_norm),
                c.samples
            ));
        }
    }
    Ok(if ok { 0 } else { 1 })
}

fn error_line<T: Serialize>(sink: &mut Sink, format: Format, id: usize, e: &T) {
    match format {
        Format::Json => sink.json(&json!({ "id": id, "error": e })),
        Format::Csv => sink.line(&format!("{id},error")),
    }
}

fn verify(suite: Suite, n: usize, budget: u64, seed: u64, tol: &Tolerances, format: Format, sink: &mut Sink) -> u8 {
    let mut all = true;
    match suite {
        Suite::Equality => {
            if format == Format::Csv {
                sink.line("spec_id,kind,gap,pass");
            }
            for (i, r) in equality_suite(n, seed, tol).into_iter().enumerate() {
                match r {
                    Ok(r) => {
                        all &= r.pass;
                        match format {
                            Format::Json => sink.json(&r),
                            Format::Csv => sink.line(&format!("{},{},{},{}", r.spec_id, r.kind, num(r.gap), r.pass)),
                        }
                    }
                    Err(e) => {
                        all = false;
                        error_line(sink, format, i, &e.to_string());
                    }
                }
            }
        }
        Suite::Invariance => {
            if format == Format::Csv {
                sink.line("id,gap_before,gap_after,pass");
            }
            for (i, r) in invariance_suite(n, seed, tol).into_iter().enumerate() {
                match r {
                    Ok(r) => {
                        all &= r.pass;
                        match format {
                            Format::Json => sink.json(&r),
                            Format::Csv => {
                                sink.line(&format!("{},{},{},{}", r.id, num(r.gap_before), num(r.gap_after), r.pass))
                            }
                        }
                    }
                    Err(e) => {
                        all = false;
                        error_line(sink, format, i, &e.to_string());
                    }
                }
            }
        }
        Suite::Psh => {
            if format == Format::Csv {
                sink.line("id,rho_center,rho_mean,pass");
            }
            for r in psh_suite(n, seed) {
                all &= r.pass;
                match format {
                    Format::Json => sink.json(&r),
                    Format::Csv => sink.line(&format!("{},{},{},{}", r.id, num(r.rho_center), num(r.rho_mean), r.pass)),
                }
            }
        }
        Suite::Nonconvex => {
            let w = find_nonconvexity_witness(seed, budget);
            all = w.found;
            witness_out(&w, format, sink);
        }
    }
    if all { 0 } else { 1 }
}

fn witness_out(w: &tetra_core::verifier::WitnessReport, format: Format, sink: &mut Sink) {
    match format {
        Format::Json => sink.json(w),
        Format::Csv => {
            sink.line("found,samples,midpoint_margin,seed");
            let m = w.midpoint_margin.map(num).unwrap_or_default();
            sink.line(&format!("{},{},{m},{}", w.found, w.samples, w.seed));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_start_at_origin() {
        let s = geodesic_samples(4);
        assert_eq!(s[0], Complex64::new(0.0, 0.0));
        assert!(s.iter().all(|l| l.norm() < GEODESIC_RADIUS));
    }
}
