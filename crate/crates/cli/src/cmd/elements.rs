use rankwave::elements::{
    acoustic_hom, acoustic_inhom, characteristic_determinant, determinant_scale, entropic_hom, entropic_inhom, hydrodynamic_inhom,
    verify_element, Sign, ELEMENT_TOL,
};
use rankwave::io::Config;
use rankwave::{FluidState, PhysParams};

use super::join;
use crate::{CliError, CliResult, Ctx};

const FAMILIES: &str = "E0, A0, A_plus0, A_minus0, H0, E, A, A_hom, A_plus, A_minus";

fn eps(cfg: &Config) -> CliResult<Sign> {
    cfg.opt_parse::<Sign>("eps", "a sign (+1 or -1)")?
        .ok_or_else(|| CliError::config("missing key eps (the acoustic families need a sign)"))
}

fn lambda(cfg: &Config) -> CliResult<[f64; 3]> {
    Ok(cfg.vec3("lambda")?)
}

pub fn run(ctx: Ctx) -> CliResult {
    let cfg = &ctx.cfg;
    let params = PhysParams::new(cfg.f64("kappa")?, cfg.vec3_or("g", [0.0; 3])?, cfg.vec3_or("omega", [0.0; 3])?)?;
    let u = FluidState::new(cfg.f64("rho")?, cfg.f64("p")?, cfg.vec3_or("v", [0.0; 3])?)?;
    let family = cfg.str("family")?;
    let gamma_rho = cfg.f64_or("gamma_rho", 1.0)?;
    let tol = cfg.f64_or("tol", ELEMENT_TOL)?;
    let elem = match family.as_str() {
        "E0" => entropic_inhom(&u, &params, gamma_rho, cfg.vec3("h")?),
        "A0" => acoustic_inhom(&u, &params, lambda(cfg)?, eps(cfg)?, gamma_rho),
        "A_plus0" => acoustic_inhom(&u, &params, lambda(cfg)?, Sign::Plus, gamma_rho),
        "A_minus0" => acoustic_inhom(&u, &params, lambda(cfg)?, Sign::Minus, gamma_rho),
        "H0" => hydrodynamic_inhom(&u, &params, lambda(cfg)?, cfg.f64("delta")?),
        "E" => entropic_hom(&u, gamma_rho, cfg.vec3("h")?, lambda(cfg)?),
        "A" | "A_hom" => acoustic_hom(&u, &params, lambda(cfg)?, eps(cfg)?, gamma_rho),
        "A_plus" => acoustic_hom(&u, &params, lambda(cfg)?, Sign::Plus, gamma_rho),
        "A_minus" => acoustic_hom(&u, &params, lambda(cfg)?, Sign::Minus, gamma_rho),
        other => return Err(CliError::config(format!("key family: unknown element family {other:?} (expected one of {FAMILIES})"))),
    }?;
    cfg.finish()?;

    let res = verify_element(&u, &elem, &params);
    println!("family={}", elem.family);
    println!("gamma={}", join(&elem.gamma));
    println!("lambda={}", join(&elem.lam.to_array()));
    println!("delta={:.16e}", elem.delta);
    println!("sound_speed={:.16e}", (params.kappa * u.p / u.rho).sqrt());
    println!("residual={}", join(&res.to_array()));
    println!("residual_rel={:.3e}", res.relative());
    if elem.family.is_homogeneous() {
        let d = characteristic_determinant(&u, &elem.lam, &params)?;
        let scale = determinant_scale(&u, &elem.lam, &params);
        println!("determinant={d:.16e}");
        println!("determinant_rel={:.3e}", if scale > 0.0 { d.abs() / scale } else { d.abs() });
    }
    let ok = res.relative() <= tol;
    println!("status={}", if ok { "PASS" } else { "FAIL" });
    if ok {
        Ok(())
    } else {
        Err(CliError::verification(format!("element residual {:.3e} exceeds tolerance {tol:e}", res.relative())))
    }
}
