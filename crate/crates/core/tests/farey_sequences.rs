mod common;

use common::Gen;
use denomlab::farey::{
    farey_count, farey_distance, farey_next_1d, farey_sorted_1d, farey_stream_nd, farey_stream_par, FareyTable1d,
};
use denomlab::{par, FareyLevel, Norm};
use num_integer::Integer;
use std::sync::Mutex;

#[test]
fn next_term_walk_matches_sorting() {
    for q_max in 1..=200u64 {
        let mut all: Vec<(u64, u64)> = (1..=q_max)
            .flat_map(|q| (0..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
            .collect();
        all.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
        let mut walk = vec![(0, 1)];
        if q_max > 1 {
            let (mut prev, mut cur) = ((0, 1), (1, q_max));
            loop {
                walk.push(cur);
                match farey_next_1d(prev, cur, q_max) {
                    Ok(next) if next.0 < next.1 => {
                        prev = cur;
                        cur = next;
                    }
                    Ok(_) => break,
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert_eq!(walk, all, "Q = {q_max}");
        assert_eq!(farey_sorted_1d(q_max), all);
    }
    assert!(farey_next_1d((1, 2), (1, 1), 2).is_err());
}

#[test]
fn stream_order_count_and_parallel_agree() {
    for (n, q) in [(1, 30), (2, 12), (3, 6)] {
        let level = FareyLevel::integer(n, q).unwrap();
        let mut seq = Vec::new();
        let count = farey_stream_nd(&level, |p, q| seq.push((q, p.to_vec())));
        let mut sorted = seq.clone();
        sorted.sort();
        assert_eq!(seq, sorted);
        assert_eq!(count as u128, farey_count(&level).unwrap().count);
        let shared = Mutex::new(Vec::new());
        let pc = farey_stream_par(&level, |p, q| shared.lock().unwrap().push((q, p.to_vec())));
        let mut got = shared.into_inner().unwrap();
        got.sort();
        assert_eq!((pc, got), (count, sorted));
    }
}

#[test]
fn sequential_fallback_gives_same_stream_total() {
    let level = FareyLevel::integer(2, 25).unwrap();
    let a = farey_stream_par(&level, |_, _| {});
    let b = par::sequential(|| farey_stream_par(&level, |_, _| {}));
    assert_eq!(a, b);
}

#[test]
fn table_distance_matches_scan() {
    let mut g = Gen::new(21);
    for q_max in [1u64, 2, 7, 40, 150] {
        let table = FareyTable1d::new(q_max);
        let level = FareyLevel::integer(1, q_max).unwrap();
        for _ in 0..100 {
            let x = g.unit(100_003);
            let a = table.distance(&x);
            let b = farey_distance(std::slice::from_ref(&x), &level, Norm::Sup).unwrap();
            assert_eq!(a.exact, b.exact, "x = {x}, Q = {q_max}");
        }
    }
}
