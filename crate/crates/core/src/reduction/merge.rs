use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Attr, AttributeValue, Range};
use crate::Scalar;

/// Merges two numeric values into a range. The center is the mean of every
/// contributing sample, weighted by how many samples each side carries.
pub fn merge_numeric<F: Scalar>(a: &AttributeValue<F>, b: &AttributeValue<F>) -> Option<Range<F>> {
    let (ra, rb) = (a.as_range()?, b.as_range()?);
    let count = ra.count + rb.count;
    let (wa, wb) = (F::lit(ra.count as f64), F::lit(rb.count as f64));
    let center = (ra.center * wa + rb.center * wb) / (wa + wb);
    let (min, max) = (ra.min.min(rb.min), ra.max.max(rb.max));
    // keep the mean inside the bounds despite rounding
    Some(Range { min, max, center: center.max(min).min(max), count })
}

/// Equal labels survive; anything else removes the attribute.
pub fn merge_categorical(a: &str, b: &str) -> Option<String> {
    (a == b).then(|| a.to_string())
}

pub fn merge_tags(a: &BTreeSet<String>, b: &BTreeSet<String>) -> BTreeSet<String> {
    a.intersection(b).cloned().collect()
}

/// Merges two values of the same attribute; `None` means the attribute is dropped.
pub fn merge_values<F: Scalar>(a: &AttributeValue<F>, b: &AttributeValue<F>) -> Option<AttributeValue<F>> {
    match (a, b) {
        (AttributeValue::Category(x), AttributeValue::Category(y)) => {
            merge_categorical(x, y).map(AttributeValue::Category)
        }
        (AttributeValue::TagSet(x), AttributeValue::TagSet(y)) => Some(AttributeValue::TagSet(merge_tags(x, y))),
        _ => merge_numeric(a, b).map(AttributeValue::Range),
    }
}

/// Folds the attributes of `sample` into `concept`.
///
/// Shared attributes are merged. An attribute the sample lacks keeps its
/// numeric range, but a label or tag set loses its support and is removed or
/// emptied. Attributes only the sample carries are not adopted.
pub fn merge_attrs<F: Scalar>(
    concept: &BTreeMap<Attr, AttributeValue<F>>,
    sample: &BTreeMap<Attr, AttributeValue<F>>,
) -> BTreeMap<Attr, AttributeValue<F>> {
    let mut out = BTreeMap::new();
    for (&attr, cv) in concept {
        let merged = match (cv, sample.get(&attr)) {
            (cv, Some(sv)) => merge_values(cv, sv),
            (AttributeValue::Category(_), None) => None,
            (AttributeValue::TagSet(_), None) => Some(AttributeValue::TagSet(BTreeSet::new())),
            (numeric, None) => Some(numeric.lifted()),
        };
        if let Some(v) = merged {
            out.insert(attr, v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: f64) -> AttributeValue<f64> {
        AttributeValue::Scalar(v)
    }

    fn fold(values: &[f64]) -> Range<f64> {
        let mut acc = s(values[0]).lifted();
        for &v in &values[1..] {
            acc = AttributeValue::Range(merge_numeric(&acc, &s(v)).unwrap());
        }
        acc.as_range().unwrap()
    }

    #[test]
    fn endpoint_counts_two_four_two() {
        let r = fold(&[2.0, 4.0, 2.0]);
        assert_eq!((r.min, r.max, r.count), (2.0, 4.0, 3));
        assert!((r.center - 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn identical_scalars() {
        let r = merge_numeric(&s(5.0), &s(5.0)).unwrap();
        assert_eq!(r, Range { min: 5.0, max: 5.0, center: 5.0, count: 2 });
    }

    #[test]
    fn every_order_of_one_two_three() {
        let orders = [[1.0, 2.0, 3.0], [1.0, 3.0, 2.0], [2.0, 1.0, 3.0], [2.0, 3.0, 1.0], [3.0, 1.0, 2.0], [3.0, 2.0, 1.0]];
        for o in orders {
            assert_eq!(fold(&o), Range { min: 1.0, max: 3.0, center: 2.0, count: 3 }, "{o:?}");
        }
    }

    #[test]
    fn categorical_rules() {
        assert_eq!(merge_categorical("OPEN", "OPEN").as_deref(), Some("OPEN"));
        assert_eq!(merge_categorical("Left", "Right"), None);
        let x = merge_categorical("X", "X").unwrap();
        assert_eq!(merge_categorical(&x, "X").as_deref(), Some("X"));
    }

    #[test]
    fn tag_intersection() {
        let set = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<BTreeSet<_>>();
        assert_eq!(merge_tags(&set(&["p", "q"]), &set(&["q", "r"])), set(&["q"]));
        assert_eq!(merge_tags(&set(&["p", "q"]), &set(&["p", "q"])), set(&["p", "q"]));
        assert!(merge_tags(&set(&["p"]), &set(&["q"])).is_empty());
    }

    #[test]
    fn node_attribute_merge() {
        let concept = BTreeMap::from([
            (Attr::Length, s(1.0).lifted()),
            (Attr::HorizontalDirection, AttributeValue::category("Left")),
            (Attr::Quadrant, AttributeValue::category("2")),
        ]);
        let sample = BTreeMap::from([
            (Attr::Length, s(3.0)),
            (Attr::HorizontalDirection, AttributeValue::category("Right")),
            (Attr::NormalizedMidX, s(0.0)),
        ]);
        let m = merge_attrs(&concept, &sample);
        assert_eq!(m.len(), 1);
        assert_eq!(m[&Attr::Length].as_range().unwrap().center, 2.0);
    }

    proptest! {
        #[test]
        fn numeric_merge_is_order_insensitive(values in proptest::collection::vec(-100.0f64..100.0, 1..8), seed in any::<u64>()) {
            let mut shuffled = values.clone();
            let n = shuffled.len();
            for i in 0..n {
                let j = (seed.rotate_left(i as u32) as usize) % n;
                shuffled.swap(i, j);
            }
            let (a, b) = (fold(&values), fold(&shuffled));
            prop_assert_eq!((a.min, a.max, a.count), (b.min, b.max, b.count));
            prop_assert!((a.center - b.center).abs() < 1e-9);
            prop_assert!(a.is_consistent());
            let mean = values.iter().sum::<f64>() / n as f64;
            prop_assert!((a.center - mean).abs() < 1e-9);
        }

        #[test]
        fn categorical_is_commutative(a in "[ab]", b in "[ab]", c in "[ab]") {
            prop_assert_eq!(merge_categorical(&a, &b), merge_categorical(&b, &a));
            let left = merge_categorical(&a, &b).and_then(|x| merge_categorical(&x, &c));
            let right = merge_categorical(&b, &c).and_then(|x| merge_categorical(&a, &x));
            prop_assert_eq!(left, right);
        }
    }
}
