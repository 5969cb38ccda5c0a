//! Seeded random nets for exhaustive cross-checks.

use petri_causal_core::{Net, NetBuilder};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Limits for generated nets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shape {
    pub max_places: usize,
    pub max_transitions: usize,
    pub max_weight: u32,
    pub max_tokens: u32,
}

impl Default for Shape {
    fn default() -> Self {
        Self { max_places: 4, max_transitions: 4, max_weight: 2, max_tokens: 2 }
    }
}

/// One net drawn from `rng`. Every transition gets a non-empty preset.
pub fn random_net(rng: &mut impl Rng, shape: Shape, name: &str) -> Net {
    let places = rng.gen_range(1..=shape.max_places);
    let transitions = rng.gen_range(1..=shape.max_transitions);
    let mut b = NetBuilder::new(name);
    for s in 0..places {
        b.place(format!("s{s}"), rng.gen_range(0..=shape.max_tokens)).unwrap();
    }
    for t in 0..transitions {
        let t = format!("t{t}");
        b.transition(t.as_str()).unwrap();
        let forced = rng.gen_range(0..places);
        for s in 0..places {
            let pre = if s == forced { rng.gen_range(1..=shape.max_weight) } else { rng.gen_range(0..=shape.max_weight) };
            if pre > 0 {
                b.arc(format!("s{s}"), t.as_str(), pre).unwrap();
            }
            let post = rng.gen_range(0..=shape.max_weight);
            if post > 0 {
                b.arc(t.as_str(), format!("s{s}"), post).unwrap();
            }
        }
    }
    b.build().expect("generated nets are well-formed")
}

/// `count` nets from a ChaCha8 stream seeded with `seed`.
pub fn corpus(seed: u64, count: usize, shape: Shape) -> Vec<Net> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|i| random_net(&mut rng, shape, &format!("random-{seed}-{i}"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::write_net;

    #[test]
    fn corpus_is_reproducible_and_within_shape() {
        let a = corpus(7, 50, Shape::default());
        let b = corpus(7, 50, Shape::default());
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(write_net(x), write_net(y));
            assert!(x.place_count() <= 4 && x.transition_count() <= 4);
            for t in x.transitions() {
                assert!(!x.preset(t).is_empty());
                assert!(x.preset(t).iter().chain(x.postset(t).iter()).all(|(_, w)| w <= 2));
            }
            assert!(x.initial_marking().iter().all(|(_, k)| k <= 2));
        }
        assert_ne!(write_net(&corpus(8, 1, Shape::default())[0]), write_net(&a[0]));
    }
}
