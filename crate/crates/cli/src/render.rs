use stickel_core::field::AbelianField;

pub fn field_name(f: &AbelianField) -> String {
    if f.is_rationals() {
        return "Q".into();
    }
    let h = f.kernel_generators();
    if h.iter().all(|&g| g == 1) {
        format!("Q(zeta_{})", f.conductor())
    } else {
        format!(
            "Q(zeta_{})^<{}>",
            f.conductor(),
            h.iter()
                .map(|g| g.to_string())
                .collect::<Vec<_>>()
                .join(",")
        )
    }
}

pub fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}
