mod common;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::{all_configurations, load, random_pes, rng};
use wtc::pes::{EventId, EventSet, Label};
use wtc::pomset::{
    all_isomorphisms, extend_iso, induced_pomset, is_pomset_iso, is_posetal_triple,
    pointwise_prefixes_with, pomset_isomorphic, Iso, Pomset, PomsetError, PosetalTriple,
    PrefixMode,
};

fn random_pomset(rng: &mut ChaCha8Rng, n: usize) -> Pomset {
    let labels = (0..n)
        .map(|_| Label::visible(*["a", "b"].choose(rng).unwrap()))
        .collect();
    let mut order = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.3) {
                order.push((i, j));
            }
        }
    }
    Pomset::from_parts(labels, &order)
}

/// Relabels positions of `p` by a random permutation, keeping the same shape.
fn shuffled(rng: &mut ChaCha8Rng, p: &Pomset) -> Pomset {
    let n = p.len();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut labels = vec![Label::Tau; n];
    for i in 0..n {
        labels[perm[i]] = p.label_at(i).clone();
    }
    let order: Vec<_> = p
        .order_pairs()
        .into_iter()
        .map(|(i, j)| (perm[i], perm[j]))
        .collect();
    Pomset::from_parts(labels, &order)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out
}

/// Every bijection of positions that preserves labels and order, by brute force.
fn brute_isos(p: &Pomset, q: &Pomset) -> Vec<Vec<usize>> {
    if p.len() != q.len() {
        return vec![];
    }
    permutations(p.len())
        .into_iter()
        .filter(|g| {
            (0..p.len()).all(|i| p.label_at(i) == q.label_at(g[i]))
                && (0..p.len()).all(|i| (0..p.len()).all(|k| p.lt_at(i, k) == q.lt_at(g[i], g[k])))
        })
        .collect()
}

fn as_positions(p: &Pomset, q: &Pomset, f: &Iso) -> Vec<usize> {
    p.carrier()
        .iter()
        .map(|&e| {
            let img = f.get(e).unwrap();
            q.carrier().iter().position(|&x| x == img).unwrap()
        })
        .collect()
}

#[test]
fn isomorphisms_match_permutation_search() {
    let mut rng = rng(10);
    let mut positive = 0;
    for _ in 0..400 {
        let n = rng.gen_range(0..=5);
        let p = random_pomset(&mut rng, n);
        let q = if rng.gen_bool(0.6) {
            shuffled(&mut rng, &p)
        } else {
            random_pomset(&mut rng, n)
        };
        let mut want = brute_isos(&p, &q);
        want.sort();
        let mut got: Vec<_> = all_isomorphisms(&p, &q)
            .iter()
            .map(|f| as_positions(&p, &q, f))
            .collect();
        got.sort();
        assert_eq!(got, want);
        assert_eq!(pomset_isomorphic(&p, &q).is_some(), !want.is_empty());
        for f in all_isomorphisms(&p, &q) {
            assert!(is_pomset_iso(&p, &q, &f));
            assert!(is_pomset_iso(&q, &p, &f.inverse()));
        }
        positive += (!want.is_empty()) as usize;
    }
    assert!(positive > 100);
}

#[test]
fn induced_pomsets() {
    let p = load("a-tau-b.pes");
    let e = |n| p.event_by_name(n).unwrap();
    let x: EventSet = [e("e1"), e("e3")].into_iter().collect();
    let pom = induced_pomset(&p, x).unwrap();
    assert_eq!(pom.len(), 2);
    assert_eq!(
        pom.order_pairs().len(),
        1,
        "a before b through the silent event"
    );
    assert!(matches!(
        induced_pomset(&p, EventSet::singleton(e("e2"))),
        Err(PomsetError::TauInCarrier(_))
    ));
    assert!(induced_pomset(&p, EventSet::EMPTY).unwrap().is_empty());

    let choice = load("choice-ab.pes");
    assert_eq!(
        induced_pomset(&choice, choice.all_events()),
        Err(PomsetError::InconsistentSet)
    );
    let par = load("par-ab.pes");
    assert!(induced_pomset(&par, par.all_events())
        .unwrap()
        .is_antichain());
}

#[test]
fn extension_rules() {
    let p = load("a-tau-b.pes");
    let e = |n| p.event_by_name(n).unwrap();
    let f = extend_iso(&Iso::new(), &p, e("e1"), &p, e("e1")).unwrap();
    assert_eq!(
        extend_iso(&f, &p, e("e1"), &p, e("e3")),
        Err(PomsetError::DomainClash(e("e1")))
    );
    assert_eq!(
        extend_iso(&f, &p, e("e3"), &p, e("e1")),
        Err(PomsetError::RangeClash(e("e1")))
    );
    assert_eq!(
        extend_iso(&f, &p, e("e2"), &p, e("e3")),
        Err(PomsetError::TauArgument(e("e2")))
    );
    let g = extend_iso(&f, &p, e("e3"), &p, e("e3")).unwrap();
    assert!(f.is_subset(&g));
    assert_eq!(g.restrict_to(EventSet::singleton(e("e1"))), f);
    assert_eq!(g.then(&g.inverse()).len(), 2);
}

#[test]
fn prefixes_are_triples_below() {
    let mut rng = rng(11);
    for _ in 0..200 {
        let p = random_pes(&mut rng, 5, &["a"], 0.4);
        let c = *all_configurations(&p).choose(&mut rng).unwrap();
        let c = p.configuration(c).unwrap();
        let vis = p.visible_part(c.events()).unwrap();
        let id = Iso::from_pairs(vis.iter().map(|e| (e, e)));
        let t = PosetalTriple {
            left: c,
            iso: id,
            right: c,
        };
        assert!(is_posetal_triple(&p, &p, c, &t.iso, c));
        let all = pointwise_prefixes_with(&p, &p, &t, PrefixMode::AllConfigurations, false);
        let gen = pointwise_prefixes_with(&p, &p, &t, PrefixMode::VisibleGenerated, false);
        for s in all.iter().chain(&gen) {
            assert!(s.is_prefix_of(&t));
            assert!(is_posetal_triple(&p, &p, s.left, &s.iso, s.right));
        }
        assert!(gen.iter().all(|s| all.contains(s)));
        assert!(gen.contains(&PosetalTriple::empty()));
        // one generated prefix per downward-closed visible subset
        let downward = (0u64..1 << p.len())
            .map(EventSet)
            .filter(|&v| v.is_subset(vis) && p.visible_part(p.closure(v)).unwrap() == v)
            .count();
        assert_eq!(gen.len(), downward);
    }
}

#[test]
fn strong_prefixes_track_silent_events() {
    let p = load("a-tau-b.pes");
    let c = p.configuration(p.all_events()).unwrap();
    let id = Iso::from_pairs(p.events().map(|e: EventId| (e, e)));
    let t = PosetalTriple {
        left: c,
        iso: id,
        right: c,
    };
    let strong = pointwise_prefixes_with(&p, &p, &t, PrefixMode::AllConfigurations, true);
    assert_eq!(strong.len(), all_configurations(&p).len());
}
