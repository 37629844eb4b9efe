mod common;

use std::collections::BTreeSet;

use netgame::{Cpd, GameNet, NetError, PolicyTable, Rule, Value, VariableSpace};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;

fn names(net: &GameNet, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| net.id(i).to_string()).collect()
}

fn set(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

#[test]
fn fig1_is_valid() {
    assert!(fig1().validate().is_empty(), "{:?}", fig1().validate());
}

#[test]
fn back_edge_gives_one_cycle_diagnostic() {
    let net = fig1_builder().edge("D", "A").build().unwrap();
    let diags = net.validate();
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert_eq!(diags[0].rule, Rule::Acyclic);
    for id in ["A", "B", "D", "P1"] {
        assert!(diags[0].message.contains(id), "{}", diags[0].message);
    }
}

#[test]
fn decision_with_cpd_gives_one_partition_diagnostic() {
    let net = fig1_builder()
        .attach_cpd("P1", Cpd::uniform_discrete(vec![0, 1]))
        .build()
        .unwrap();
    let diags = net.validate();
    assert_eq!(diags.len(), 1, "{diags:?}");
    assert_eq!(diags[0].rule, Rule::DecisionHasNoCpd);
    assert_eq!(diags[0].node, "P1");
}

#[test]
fn other_rule_violations_are_reported() {
    let net = GameNet::builder()
        .chance(
            "A",
            VariableSpace::discrete([1]),
            &[],
            Cpd::table(vec![1], vec![1.0]),
        )
        .chance_without_cpd("B", VariableSpace::binary(), &[])
        .chance(
            "C",
            VariableSpace::binary(),
            &[],
            Cpd::table(vec![0, 1], vec![0.5, 0.6]),
        )
        .chance(
            "R",
            VariableSpace::interval(1.0, 1.0),
            &[],
            Cpd::uniform_interval(0.0, 1.0),
        )
        .decision("X", VariableSpace::binary(), &[], 0)
        .decision("Y", VariableSpace::binary(), &[], 0)
        .decision("Z", VariableSpace::binary(), &[], 2)
        .utility(0, |_| 0.0)
        .build()
        .unwrap();
    let rules: BTreeSet<(String, Rule)> = net
        .validate()
        .into_iter()
        .map(|d| (d.node, d.rule))
        .collect();
    let expect = [
        ("A", Rule::SpaceWellFormed),
        ("B", Rule::ChanceHasCpd),
        ("C", Rule::CpdNormalized),
        ("R", Rule::SpaceWellFormed),
        ("Y", Rule::OneNodePerPlayer),
        ("player1", Rule::OneNodePerPlayer),
        ("player1", Rule::UtilityPerPlayer),
        ("player2", Rule::UtilityPerPlayer),
    ];
    let expect: BTreeSet<(String, Rule)> =
        expect.iter().map(|(n, r)| (n.to_string(), *r)).collect();
    assert_eq!(rules, expect);
}

#[test]
fn builder_rejects_unknown_parent_and_duplicates() {
    let e = GameNet::builder()
        .chance(
            "A",
            VariableSpace::binary(),
            &["Q"],
            Cpd::uniform_discrete(vec![0, 1]),
        )
        .build();
    assert!(matches!(e, Err(NetError::UnknownParent { .. })));
    let e = GameNet::builder()
        .chance(
            "A",
            VariableSpace::binary(),
            &[],
            Cpd::uniform_discrete(vec![0, 1]),
        )
        .chance(
            "A",
            VariableSpace::binary(),
            &[],
            Cpd::uniform_discrete(vec![0, 1]),
        )
        .build();
    assert!(matches!(e, Err(NetError::DuplicateNode(_))));
}

#[test]
fn topological_order_examples() {
    let c = chain();
    assert_eq!(
        names(&c, &c.topological_order().unwrap()),
        set(&["A", "B", "C"])
    );

    let net = fig1();
    let order = names(&net, &net.topological_order().unwrap());
    let pos = |id: &str| order.iter().position(|x| x == id).unwrap();
    assert!(pos("A") < pos("B") && pos("A") < pos("C"));
    assert!(pos("B") < pos("P1") && pos("C") < pos("P2"));
    assert!(pos("P1") < pos("D") && pos("P2") < pos("D"));
    // Stable tie-break: B before C.
    assert_eq!(order, set(&["A", "B", "C", "P1", "P2", "D"]));

    let single = GameNet::builder()
        .chance(
            "Only",
            VariableSpace::binary(),
            &[],
            Cpd::uniform_discrete(vec![0, 1]),
        )
        .build()
        .unwrap();
    assert_eq!(
        names(&single, &single.topological_order().unwrap()),
        set(&["Only"])
    );
}

#[test]
fn topological_order_names_a_cycle() {
    let net = fig1_builder().edge("D", "A").build().unwrap();
    match net.topological_order() {
        Err(NetError::Cycle(c)) => {
            assert_eq!(c.first(), c.last());
            let inner: BTreeSet<&str> = c.iter().map(String::as_str).collect();
            assert_eq!(inner, ["A", "B", "D", "P1"].into_iter().collect());
        }
        other => panic!("expected cycle, got {other:?}"),
    }
}

#[test]
fn partition_sets_examples() {
    let c = chain();
    let p = c.partition_sets_of("B").unwrap();
    assert_eq!(names(&c, &p.successors), set(&["C"]));
    assert!(p.y.is_empty());

    let net = fig1();
    let p = net.partition_sets_of("P1").unwrap();
    assert_eq!(names(&net, &p.parents), set(&["B"]));
    assert_eq!(names(&net, &p.successors), set(&["D"]));
    assert_eq!(names(&net, &p.y), set(&["A", "C", "P2"]));

    assert!(matches!(
        net.partition_sets_of("nope"),
        Err(NetError::UnknownNode(_))
    ));
}

#[test]
fn forward_sample_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let net = fig1();
    let p2 = net.index_of("P2").unwrap();
    let p1 = net.index_of("P1").unwrap();

    // All nodes fixed: identity.
    let fixed = net
        .instantiation(&[
            ("A", Value::Discrete(1)),
            ("B", Value::Discrete(0)),
            ("C", Value::Discrete(1)),
            ("D", Value::Discrete(0)),
            ("P1", Value::Discrete(1)),
            ("P2", Value::Discrete(0)),
        ])
        .unwrap();
    let out = net
        .forward_sample(&fixed, &PolicyTable::new(), &mut rng)
        .unwrap();
    assert_eq!(out, fixed);

    // A missing strategy is an error.
    let e = net.forward_sample(&net.empty_instantiation(), &PolicyTable::new(), &mut rng);
    assert!(matches!(e, Err(NetError::MissingStrategy(_))));

    let policies = PolicyTable::new()
        .with(p1, Cpd::uniform_discrete(vec![0, 1]))
        .with(p2, fig1_p2_level0());
    let out = net
        .forward_sample(&net.empty_instantiation(), &policies, &mut rng)
        .unwrap();
    assert!(out.is_complete());

    let c = chain();
    let a = c.instantiation(&[("A", Value::Discrete(1))]).unwrap();
    let out = c.forward_sample(&a, &PolicyTable::new(), &mut rng).unwrap();
    assert_eq!(out.get(c.index_of("B").unwrap()), Some(&Value::Discrete(1)));
}

#[test]
fn two_node_marginal_within_three_sigma() {
    let net = GameNet::builder()
        .chance(
            "A",
            VariableSpace::binary(),
            &[],
            Cpd::table(vec![0, 1], vec![0.3, 0.7]),
        )
        .chance("B", VariableSpace::binary(), &["A"], noisy_copy(0.9))
        .build()
        .unwrap();
    let b = net.index_of("B").unwrap();
    let exact = 0.7 * 0.9 + 0.3 * 0.1;
    let n = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut ones = 0;
    for _ in 0..n {
        let s = net
            .forward_sample(&net.empty_instantiation(), &PolicyTable::new(), &mut rng)
            .unwrap();
        ones += s.get(b).unwrap().as_discrete().unwrap();
    }
    let p = ones as f64 / n as f64;
    let sd = (exact * (1.0 - exact) / n as f64).sqrt();
    assert!((p - exact).abs() < 3.0 * sd, "{p} vs {exact}");
}

#[test]
fn eval_density_examples() {
    let c = chain();
    let b = c.index_of("B").unwrap();
    let pa = c.instantiation(&[("A", Value::Discrete(1))]).unwrap();
    assert_eq!(c.eval_density(b, &Value::Discrete(1), &pa).unwrap(), 1.0);
    assert_eq!(c.eval_density(b, &Value::Discrete(0), &pa).unwrap(), 0.0);

    let g = GameNet::builder()
        .chance(
            "G",
            VariableSpace::interval(-10.0, 10.0),
            &[],
            Cpd::gaussian(|_| 0.0, 1.0),
        )
        .build()
        .unwrap();
    let d = g
        .eval_density(0, &Value::Real(0.0), &g.empty_instantiation())
        .unwrap();
    assert!((d - 0.398_942_280_401_432_7).abs() < 1e-12);

    let net = fig1();
    let p1 = net.index_of("P1").unwrap();
    assert!(matches!(
        net.eval_density(p1, &Value::Discrete(0), &net.empty_instantiation()),
        Err(NetError::DensityUnavailable(_))
    ));
    let p2 = net.index_of("P2").unwrap();
    let pol = PolicyTable::new().with(p2, fig1_p2_level0());
    let ctx = net.instantiation(&[("C", Value::Discrete(1))]).unwrap();
    assert!(
        (net.eval_density_with(p2, &Value::Discrete(1), &ctx, &pol)
            .unwrap()
            - 0.9)
            .abs()
            < 1e-15
    );
}

#[test]
fn dump_lists_nodes_and_parents() {
    let text = fig1().dump();
    assert!(text.starts_with("net nodes=6 players=2\n"));
    assert!(text.contains("node D chance discrete{0,1} parents=P1,P2\n"));
    assert!(text.contains("node P1 decision(0) discrete{0,1} parents=B\n"));
    assert!(text.contains("node A chance discrete{0,1} parents=-\n"));
    assert!(text.ends_with("utility 0\nutility 1\n"));
}

// ---------------------------------------------------------------------------
// Random DAG properties.

/// Random DAG over `n` binary chance nodes: node j may have any i < j as
/// parent. Node ids are chosen so that index order differs from the
/// generation order.
fn random_dag(n: usize, edges: &[bool], probs: &[f64]) -> GameNet {
    let ids: Vec<String> = (0..n)
        .map(|i| format!("N{}", (i * 7 + 3) % 10 + 10 * i))
        .collect();
    let mut b = GameNet::builder();
    let mut k = 0;
    for j in 0..n {
        let mut parents = Vec::new();
        for i in 0..j {
            if edges[k] {
                parents.push(ids[i].as_str());
            }
            k += 1;
        }
        let table: Vec<f64> = probs[j * 16..j * 16 + 16].to_vec();
        let cpd = bernoulli_given(move |pa| {
            let mut code = 0usize;
            for v in pa {
                code = code * 2 + v.as_discrete().unwrap() as usize;
            }
            table[code % 16]
        });
        b = b.chance(&ids[j], VariableSpace::binary(), &parents, cpd);
    }
    b.build().unwrap()
}

fn dag_strategy() -> impl Strategy<Value = (usize, Vec<bool>, Vec<f64>)> {
    (1usize..=7).prop_flat_map(|n| {
        (
            Just(n),
            prop::collection::vec(any::<bool>(), n * (n - 1) / 2),
            prop::collection::vec(0.05f64..0.95, n * 16),
        )
    })
}

/// Bayes-ball reachability: the set of nodes with an active trail from
/// `source` given `observed`.
fn d_connected(net: &GameNet, source: usize, observed: &[bool]) -> Vec<bool> {
    let n = net.len();
    // Ancestors of observed nodes (including themselves).
    let mut anc = observed.to_vec();
    let mut stack: Vec<usize> = (0..n).filter(|&i| observed[i]).collect();
    while let Some(v) = stack.pop() {
        for &p in net.parents(v) {
            if !anc[p] {
                anc[p] = true;
                stack.push(p);
            }
        }
    }
    // (node, arrived_from_child)
    let mut visited = vec![[false; 2]; n];
    let mut reach = vec![false; n];
    let mut queue = vec![(source, true)];
    while let Some((v, up)) = queue.pop() {
        if visited[v][up as usize] {
            continue;
        }
        visited[v][up as usize] = true;
        if !observed[v] {
            reach[v] = true;
        }
        if up && !observed[v] {
            for &p in net.parents(v) {
                queue.push((p, true));
            }
            for &c in net.children(v) {
                queue.push((c, false));
            }
        } else if !up {
            if !observed[v] {
                for &c in net.children(v) {
                    queue.push((c, false));
                }
            }
            if anc[v] {
                for &p in net.parents(v) {
                    queue.push((p, true));
                }
            }
        }
    }
    reach
}

fn enumerate_joint(net: &GameNet) -> Vec<f64> {
    let n = net.len();
    let mut out = vec![0.0; 1 << n];
    for (code, slot) in out.iter_mut().enumerate() {
        let mut inst = net.empty_instantiation();
        for i in 0..n {
            inst.set(i, Value::Discrete(((code >> i) & 1) as i64));
        }
        *slot = (0..n)
            .map(|i| net.eval_density(i, inst.get(i).unwrap(), &inst).unwrap())
            .product();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partition_identities_hold((n, edges, probs) in dag_strategy()) {
        let net = random_dag(n, &edges, &probs);
        prop_assert!(net.validate().is_empty());
        for v in 0..net.len() {
            let p = net.partition_sets(v).unwrap();
            let y_pa: BTreeSet<usize> = p.y.iter().chain(&p.parents).copied().collect();
            let minus: BTreeSet<usize> = p.non_successors.iter().copied().collect();
            prop_assert_eq!(&y_pa, &minus);
            let mut all: Vec<usize> = p.successors.iter().chain(&p.non_successors).copied().collect();
            all.push(v);
            all.sort_unstable();
            prop_assert_eq!(all, (0..net.len()).collect::<Vec<_>>());
            for &s in &p.successors {
                prop_assert!(!minus.contains(&s));
            }
        }
    }

    #[test]
    fn y_is_d_separated_from_v_given_parents((n, edges, probs) in dag_strategy()) {
        let net = random_dag(n, &edges, &probs);
        for v in 0..net.len() {
            let p = net.partition_sets(v).unwrap();
            let mut observed = vec![false; net.len()];
            for &q in &p.parents {
                observed[q] = true;
            }
            let reach = d_connected(&net, v, &observed);
            for &y in &p.y {
                prop_assert!(!reach[y], "{} reaches {}", net.id(v), net.id(y));
            }
        }
    }

    #[test]
    fn topological_order_respects_edges((n, edges, probs) in dag_strategy()) {
        let net = random_dag(n, &edges, &probs);
        let order = net.topological_order().unwrap();
        let mut pos = vec![0; net.len()];
        for (k, &v) in order.iter().enumerate() {
            pos[v] = k;
        }
        for v in 0..net.len() {
            for &p in net.parents(v) {
                prop_assert!(pos[p] < pos[v]);
            }
        }
    }

    #[test]
    fn fully_fixed_sample_is_identity((n, edges, probs) in dag_strategy(), bits in any::<u8>(), seed in any::<u64>()) {
        let net = random_dag(n, &edges, &probs);
        let mut fixed = net.empty_instantiation();
        for i in 0..net.len() {
            fixed.set(i, Value::Discrete(((bits >> i) & 1) as i64));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(net.forward_sample(&fixed, &PolicyTable::new(), &mut rng).unwrap(), fixed);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn empirical_joint_converges((n, edges, probs) in (1usize..=4).prop_flat_map(|n| {
        (Just(n), prop::collection::vec(any::<bool>(), n * (n - 1) / 2), prop::collection::vec(0.05f64..0.95, n * 16))
    }), seed in any::<u64>()) {
        let net = random_dag(n, &edges, &probs);
        let exact = enumerate_joint(&net);
        let samples = 100_000;
        let mut counts = vec![0usize; exact.len()];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let s = net.forward_sample(&net.empty_instantiation(), &PolicyTable::new(), &mut rng).unwrap();
            let code: usize = (0..n).map(|i| (s.get(i).unwrap().as_discrete().unwrap() as usize) << i).sum();
            counts[code] += 1;
        }
        let tv: f64 = 0.5 * exact.iter().zip(&counts).map(|(p, &c)| (p - c as f64 / samples as f64).abs()).sum::<f64>();
        prop_assert!(tv < 0.02, "tv = {}", tv);
    }
}
