use crate::latent::LatentField;

/// Decoupled conditioning record handed to a velocity field.
///
/// `illum_params` carry everything lighting-specific; `agnostic_params` and
/// `structural` describe content that must be shared between a source and a
/// target condition.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConditionBundle {
    /// Anchor frame (a single-frame latent), if any.
    pub reference_frame: Option<LatentField>,
    pub structural: Option<LatentField>,
    pub illum_params: Vec<f64>,
    pub agnostic_params: Vec<f64>,
}

impl ConditionBundle {
    pub fn new(illum_params: Vec<f64>, agnostic_params: Vec<f64>) -> Self {
        ConditionBundle {
            illum_params,
            agnostic_params,
            ..Default::default()
        }
    }

    pub fn with_reference(mut self, frame: LatentField) -> Self {
        self.reference_frame = Some(frame);
        self
    }

    pub fn with_structural(mut self, field: LatentField) -> Self {
        self.structural = Some(field);
        self
    }

    /// Copy of this bundle with different lighting.
    pub fn relit(&self, illum_params: Vec<f64>) -> Self {
        ConditionBundle {
            illum_params,
            ..self.clone()
        }
    }

    /// A source/target pair is valid when only lighting differs.
    pub fn is_valid_pair(&self, other: &ConditionBundle) -> bool {
        self.agnostic_params == other.agnostic_params && self.structural == other.structural
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_validity_ignores_lighting() {
        let src = ConditionBundle::new(vec![1.0, 0.0, 0.2], vec![0.5, 0.5, 0.3]);
        let tar = src.relit(vec![2.0, 1.0, 0.6]);
        assert!(src.is_valid_pair(&tar));
        assert_ne!(src, tar);
        let moved = ConditionBundle::new(vec![1.0, 0.0, 0.2], vec![0.4, 0.5, 0.3]);
        assert!(!src.is_valid_pair(&moved));
    }
}
