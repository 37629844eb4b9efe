#![allow(dead_code)]

use netgame::{Cpd, GameNet, Value, VariableSpace};

pub fn bernoulli_given<F>(f: F) -> Cpd
where
    F: Fn(&[&Value]) -> f64 + Send + Sync + 'static,
{
    Cpd::categorical(vec![0, 1], move |pa| {
        let p = f(pa);
        vec![1.0 - p, p]
    })
}

/// Copies the single parent with probability `keep`.
pub fn noisy_copy(keep: f64) -> Cpd {
    bernoulli_given(move |pa| {
        if pa[0].as_discrete() == Some(1) {
            keep
        } else {
            1.0 - keep
        }
    })
}

pub fn eq(a: i64, b: i64) -> f64 {
    if a == b {
        1.0
    } else {
        0.0
    }
}

/// Six-node game: A -> B -> P1 -> D, A -> C -> P2 -> D.
pub fn fig1() -> GameNet {
    fig1_builder().build().unwrap()
}

pub fn fig1_builder() -> netgame::GameNetBuilder {
    let bin = VariableSpace::binary;
    GameNet::builder()
        .chance("A", bin(), &[], Cpd::table(vec![0, 1], vec![0.4, 0.6]))
        .chance("B", bin(), &["A"], noisy_copy(0.8))
        .chance("C", bin(), &["A"], noisy_copy(0.7))
        .decision("P1", bin(), &["B"], 0)
        .decision("P2", bin(), &["C"], 1)
        .chance(
            "D",
            bin(),
            &["P1", "P2"],
            bernoulli_given(|pa| if pa[0] == pa[1] { 0.9 } else { 0.2 }),
        )
        .utility(0, |x| {
            2.0 * x.discrete("D") as f64 + eq(x.discrete("P1"), x.discrete("A"))
        })
        .utility(1, |x| {
            x.discrete("D") as f64 - 0.5 * x.discrete("P2") as f64
        })
}

/// P2's level-0 behaviour in the six-node game: copy C with probability 0.9.
pub fn fig1_p2_level0() -> Cpd {
    noisy_copy(0.9)
}

pub fn chain() -> GameNet {
    GameNet::builder()
        .chance(
            "A",
            VariableSpace::binary(),
            &[],
            Cpd::table(vec![0, 1], vec![0.5, 0.5]),
        )
        .chance(
            "B",
            VariableSpace::binary(),
            &["A"],
            Cpd::deterministic(|pa| pa[0].clone()),
        )
        .chance(
            "C",
            VariableSpace::binary(),
            &["B"],
            Cpd::deterministic(|pa| pa[0].clone()),
        )
        .build()
        .unwrap()
}

/// Bob picks from 0..10, Nature (level 0 only) from a wide uniform range;
/// Bob's utility is his move minus Nature's.
pub fn bob_vs_nature() -> GameNet {
    GameNet::builder()
        .decision("Bob", VariableSpace::discrete(0..10), &[], 0)
        .decision("Nature", VariableSpace::discrete(0..=200), &[], 1)
        .utility(0, |x| (x.discrete("Bob") - x.discrete("Nature")) as f64)
        .utility(1, |x| (x.discrete("Nature") - x.discrete("Bob")) as f64)
        .build()
        .unwrap()
}

/// Four nodes: A -> O -> P (player 0), A -> Q (player 1).
pub fn four_node() -> GameNet {
    let bin = VariableSpace::binary;
    GameNet::builder()
        .chance("A", bin(), &[], Cpd::table(vec![0, 1], vec![0.4, 0.6]))
        .chance("O", bin(), &["A"], noisy_copy(0.8))
        .decision("P", bin(), &["O"], 0)
        .decision("Q", bin(), &["A"], 1)
        .utility(0, |x| {
            let (a, p, q) = (x.discrete("A"), x.discrete("P"), x.discrete("Q"));
            3.0 * eq(p, a) + eq(q, p) - 0.5 * p as f64
        })
        .utility(1, |x| eq(x.discrete("Q"), x.discrete("A")))
        .build()
        .unwrap()
}

pub fn four_node_q_level0() -> Cpd {
    noisy_copy(0.7)
}

/// A three-valued state A, a noisy binary evidence E about A observed by P,
/// and an opponent Q who sees A. Utilities are positive.
pub fn evidence_net() -> GameNet {
    GameNet::builder()
        .chance(
            "A",
            VariableSpace::discrete(0..3),
            &[],
            Cpd::table(vec![0, 1, 2], vec![0.5, 0.3, 0.2]),
        )
        .chance(
            "E",
            VariableSpace::binary(),
            &["A"],
            bernoulli_given(|pa| [0.2, 0.6, 0.9][pa[0].as_discrete().unwrap() as usize]),
        )
        .decision("P", VariableSpace::discrete(0..3), &["E"], 0)
        .decision("Q", VariableSpace::discrete(0..3), &["A"], 1)
        .utility(0, |x| {
            let (a, p, q) = (x.discrete("A"), x.discrete("P"), x.discrete("Q"));
            1.0 + 2.0 * eq(p, a) + eq(q, p) + 0.3 * p as f64
        })
        .utility(1, |x| eq(x.discrete("Q"), x.discrete("A")))
        .build()
        .unwrap()
}

/// Q copies A with probability 0.6, otherwise picks one of the other two.
pub fn evidence_q_level0() -> Cpd {
    Cpd::categorical(vec![0, 1, 2], |pa| {
        let a = pa[0].as_discrete().unwrap() as usize;
        let mut p = vec![0.2; 3];
        p[a] = 0.6;
        p
    })
}

/// `n` unconnected players with binary moves.
pub fn independent_players(n: usize) -> GameNet {
    let mut b = GameNet::builder();
    for i in 0..n {
        let id = format!("P{i}");
        b = b.decision(&id, VariableSpace::binary(), &[], i);
        b = b.utility(i, move |x| x.discrete(&format!("P{i}")) as f64);
    }
    b.build().unwrap()
}
