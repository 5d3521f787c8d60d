use num_bigint::BigUint;
use num_rational::BigRational;
use serde::Serialize;

use super::render_table;
use crate::colouring::{colouring_stabiliser, Colouring};
use crate::error::{Error, Result};
use crate::exact::{self, biguint_str, rational_str};
use crate::graph::{cartesian_product, Graph};
use crate::permgroup::Permutation;

#[derive(Clone, Debug, Serialize)]
pub struct LayerAction {
    pub permutation: Permutation,
    /// Each G1-layer is mapped onto some G1-layer.
    pub maps_layers_to_layers: bool,
    /// Each G1-layer is mapped onto itself.
    pub fixes_every_layer: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct LayerReport {
    pub layer_count: usize,
    pub layer_size: usize,
    #[serde(with = "biguint_str")]
    pub stabiliser_order: BigUint,
    pub elements: Vec<LayerAction>,
    pub layer_respecting: usize,
    pub layer_fixing: usize,
    #[serde(with = "rational_str")]
    pub respecting_fraction: BigRational,
    /// The stabiliser is trivial, so every statement holds vacuously.
    pub vacuous: bool,
}

impl LayerReport {
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "layers {} of size {}\nstabiliser order {}\nlayer-respecting {} ({})  layer-fixing {}{}\n",
            self.layer_count,
            self.layer_size,
            self.stabiliser_order,
            self.layer_respecting,
            exact::rational_to_string(&self.respecting_fraction),
            self.layer_fixing,
            if self.vacuous { "  all (vacuous)" } else { "" }
        );
        let rows: Vec<Vec<String>> = self
            .elements
            .iter()
            .map(|e| {
                vec![
                    e.permutation.to_string(),
                    e.maps_layers_to_layers.to_string(),
                    e.fixes_every_layer.to_string(),
                ]
            })
            .collect();
        out.push_str(&render_table(&["element", "respects", "fixes"], &rows));
        out
    }
}

/// Classifies every colour-preserving automorphism of `g1 □ g2` by its
/// action on the G1-layers `{(a, b) : a ∈ V(g1)}`, one per `b ∈ V(g2)`.
pub fn layer_fixing_report(g1: &Graph, g2: &Graph, c: &Colouring, cap: u64) -> Result<LayerReport> {
    let product = cartesian_product(g1, g2)?;
    let (n1, n2) = (g1.vertex_count(), g2.vertex_count());
    if c.len() != product.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "colouring has {} entries but the product has {} vertices",
            c.len(),
            product.vertex_count()
        )));
    }
    let stab = colouring_stabiliser(&product, c)?;
    let mut elements: Vec<LayerAction> = stab
        .elements(cap)?
        .map(|p| {
            // Vertex a * n2 + b lies in layer b.
            let mut target = vec![None; n2];
            let mut respects = true;
            for v in 0..n1 * n2 {
                let (from, to) = (v % n2, p.image(v) % n2);
                match target[from] {
                    None => target[from] = Some(to),
                    Some(t) if t != to => respects = false,
                    _ => {}
                }
            }
            let fixes = respects
                && target
                    .iter()
                    .enumerate()
                    .all(|(b, t)| t.is_none_or(|t| t == b));
            LayerAction {
                permutation: p,
                maps_layers_to_layers: respects,
                fixes_every_layer: fixes,
            }
        })
        .collect();
    elements.sort_by(|a, b| a.permutation.cmp(&b.permutation));
    let layer_respecting = elements.iter().filter(|e| e.maps_layers_to_layers).count();
    let layer_fixing = elements.iter().filter(|e| e.fixes_every_layer).count();
    let order = stab.order();
    Ok(LayerReport {
        layer_count: n2,
        layer_size: n1,
        respecting_fraction: exact::from_biguint(&BigUint::from(layer_respecting), &order),
        stabiliser_order: order,
        vacuous: elements.len() == 1,
        elements,
        layer_respecting,
        layer_fixing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;
    use crate::graph::named::path;

    #[test]
    fn constant_colouring_on_k2_square() {
        let k2 = path(2);
        let report = layer_fixing_report(&k2, &k2, &Colouring::constant(4, 2), 100).unwrap();
        assert_eq!(report.stabiliser_order, BigUint::from(8u32));
        // The perfect matching {02, 13} is kept by 4 of the 8 symmetries.
        assert_eq!(report.layer_respecting, 4);
        assert_eq!(report.layer_fixing, 2);
        assert!(report.elements.iter().any(|e| !e.maps_layers_to_layers));
        assert_eq!(report.respecting_fraction, ratio(1, 2));
    }

    #[test]
    fn trivial_stabiliser_is_vacuous() {
        let p3 = path(3);
        let k2 = path(2);
        // Colour (0,0) alone with 1: no symmetry of P3 □ K2 survives.
        let mut colours = vec![0; 6];
        colours[0] = 1;
        let report =
            layer_fixing_report(&p3, &k2, &Colouring::new(colours, 2).unwrap(), 100).unwrap();
        assert!(report.vacuous);
        assert_eq!(report.layer_respecting, 1);
        assert!(report.to_text().contains("all (vacuous)"));
    }
}
