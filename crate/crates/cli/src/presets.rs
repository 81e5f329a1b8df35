//! Built-in experiment presets as TOML documents.

pub struct Preset {
    pub name: &'static str,
    pub summary: &'static str,
    pub toml: &'static str,
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "fig2",
        summary: "powers and energies along a strongly driven trajectory, alpha = 0.1, T = 0",
        toml: r#"mode = "trajectory"
oracle = "sil"

[bath]
alpha = 0.1
omega_c = 10.0
m_mod = 60
n_ph = 2

[drive]
eps1 = -1.0
eps2 = 0.5
omega = 2.0
phi = 0.0

[time]
t_final = 150.0
stride = 10
"#,
    },
    Preset {
        name: "fig4",
        summary: "trace-distance witness of the |y,+> and |y,-> evolutions",
        toml: r#"mode = "witness"
oracle = "sil"

[bath]
alpha = 0.1
omega_c = 10.0
m_mod = 60
n_ph = 2

[drive]
eps1 = -1.0
eps2 = 0.5
omega = 2.0

[time]
t_final = 60.0
stride = 10
"#,
    },
    Preset {
        name: "fig5",
        summary: "weak-coupling Onsager matrix and ME line, alpha = 0.1, T = 0.1",
        toml: r#"mode = "onsager_sweep"
oracle = "weak_coupling"

[bath]
alpha = 0.1
omega_c = 10.0
beta = 10.0

[drive]
eps1 = 0.5
eps2 = 0.5

[sweep]
omega = { start = 0.01, stop = 5.0, count = 500 }
"#,
    },
    Preset {
        name: "fig7",
        summary: "static and dynamic TUR at maximum efficiency for four coupling strengths",
        toml: r#"mode = "tur_sweep"
oracle = "weak_coupling"

[bath]
alpha = 0.0125
omega_c = 10.0
beta = 10.0

[drive]
eps2 = 0.5

[sweep]
omega = { start = 0.01, stop = 5.0, count = 999 }
alpha = [0.0125, 0.025, 0.1, 0.2]
"#,
    },
    Preset {
        name: "fig8",
        summary: "Toulouse point alpha = 1/2 at beta = 10 / gamma, in units of gamma",
        toml: r#"mode = "tur_sweep"
oracle = "toulouse"

[bath]
alpha = 0.5
omega_c = 10.0
beta = 10.0

[drive]
eps2 = 0.5

[sweep]
omega = { start = 0.01, stop = 20.0, count = 2000 }
gamma = 1.0
"#,
    },
    Preset {
        name: "correlation",
        summary:
            "ground-state sigma_z correlation at alpha = 0.0125 on a dense single-excitation bath",
        toml: r#"mode = "correlation"
oracle = "sil"

[bath]
alpha = 0.0125
omega_c = 10.0
m_mod = 2000
n_ph = 1
beta = 10.0

[drive]
eps2 = 0.0

[sil]
dt = 0.05

[correlation]
tau_max = 1200.0
dtau = 0.05
etas = [0.015, 0.03, 0.045]
preparation = { kind = "ground_state", tolerance = 1e-10, max_restarts = 200 }
"#,
    },
];

pub fn find(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{has_errors, load};

    #[test]
    fn presets_parse_and_validate() {
        for p in PRESETS {
            let cfg = load(p.toml, &[]).unwrap_or_else(|e| panic!("{}: {e}", p.name));
            let findings = cfg.validate();
            assert!(!has_errors(&findings), "{}: {findings:?}", p.name);
        }
    }

    #[test]
    fn fig2_parameters() {
        let cfg = load(find("fig2").unwrap().toml, &[]).unwrap();
        assert_eq!(
            (cfg.drive.eps1, cfg.drive.eps2, cfg.drive.phi),
            (-1.0, 0.5, 0.0)
        );
        assert_eq!(
            (
                cfg.bath.alpha,
                cfg.bath.beta,
                cfg.bath.omega_c,
                cfg.bath.m_mod
            ),
            (0.1, None, 10.0, 60)
        );
    }
}
