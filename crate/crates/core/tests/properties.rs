use proptest::prelude::*;
use tensorconc_core::{
    frobenius_norm, phi, phi_inverse, unfold, OffsetTensor, Partition, SparseTensor, TensorShape,
};

fn tensor(k: usize, n: usize) -> impl Strategy<Value = OffsetTensor> {
    let cells = n.pow(k as u32);
    (prop::collection::vec(prop::option::weighted(0.3, -3.0..3.0f64), cells), -1.0..1.0f64).prop_map(
        move |(vals, bg)| {
            let entries = vals.into_iter().enumerate().filter_map(|(idx, v)| {
                v.map(|v| {
                    let mut c = vec![0u32; k];
                    let mut r = idx;
                    for j in (0..k).rev() {
                        c[j] = (r % n) as u32;
                        r /= n;
                    }
                    (c, v)
                })
            });
            let sp = SparseTensor::from_entries(TensorShape::new(k, n).unwrap(), entries).unwrap();
            OffsetTensor::new(sp, bg).unwrap()
        },
    )
}

fn partition(k: usize) -> impl Strategy<Value = Partition> {
    prop::collection::vec(0..k, k).prop_map(move |labels| {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut seen: Vec<usize> = Vec::new();
        for (mode, &l) in labels.iter().enumerate() {
            match seen.iter().position(|&s| s == l) {
                Some(b) => blocks[b].push(mode),
                None => {
                    seen.push(l);
                    blocks.push(vec![mode]);
                }
            }
        }
        Partition::new(k, blocks).unwrap()
    })
}

proptest! {
    #[test]
    fn phi_round_trips((k, n) in (2usize..6, 1usize..5), seed in any::<u64>()) {
        let coord: Vec<u32> = (0..k).map(|j| ((seed >> (8 * j)) % n as u64) as u32).collect();
        let part = Partition::new(k, (0..k).map(|j| vec![j]).collect()).unwrap();
        let m = phi(&part, n, &coord).unwrap();
        prop_assert_eq!(phi_inverse(&part, n, &m).unwrap(), coord);
    }

    #[test]
    fn unfolding_preserves_entries((t, p) in (2usize..5).prop_flat_map(|k| (tensor(k, 3), partition(k)))) {
        let view = unfold(&t, &p).unwrap();
        prop_assert_eq!(view.frobenius_norm().unwrap(), frobenius_norm(&t).unwrap());
        for (c, v) in t.sparse().iter() {
            prop_assert_eq!(view.get(&phi(&p, 3, c).unwrap()), v + t.background());
        }
    }

    #[test]
    fn text_round_trip(t in (2usize..4).prop_flat_map(|k| tensor(k, 3))) {
        prop_assert_eq!(OffsetTensor::from_text(&t.to_text()).unwrap(), t);
    }
}
