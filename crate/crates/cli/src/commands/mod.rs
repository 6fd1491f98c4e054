pub mod defect;
pub mod median;
pub mod vanishing;
pub mod verify;

use serde::Serialize;
use wqm::weights::WeightQuasimorphism;
use wqm::Vertex;

/// The analytic defect bound `3(R+1)·c·‖W‖∞` with its inputs.
#[derive(Serialize)]
pub struct DefectBound {
    pub formula: &'static str,
    pub r: usize,
    pub c: usize,
    pub weight_norm: f64,
    pub value: f64,
}

impl DefectBound {
    pub fn of<V: Vertex>(f: &WeightQuasimorphism<V>) -> Self {
        DefectBound {
            formula: "3(R+1)·c·‖W‖∞",
            r: f.r(),
            c: f.c(),
            weight_norm: f.norm(),
            value: f.defect_bound(),
        }
    }
}
