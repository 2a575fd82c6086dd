use tel_core::relational::{enumerate_belief_frames, Frame};
use tel_core::PointSet;

/// Counts belief frames by structure: a set partition of the points with a
/// nonempty final cluster chosen in each block.
fn structural_count(n: usize) -> usize {
    fn go(remaining: Vec<usize>) -> usize {
        let Some((_, rest)) = remaining.split_first() else { return 1 };
        let mut total = 0;
        for mask in 0u32..(1 << rest.len()) {
            let block = 1 + mask.count_ones() as usize;
            let others = rest.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 0).map(|(_, &x)| x).collect();
            total += ((1usize << block) - 1) * go(others);
        }
        total
    }
    go((0..n).collect())
}

#[test]
fn frame_counts_match_fixture_and_structure() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/belief_frame_counts.txt")).unwrap();
    for line in text.lines().filter(|l| !l.starts_with('#')) {
        let mut parts = line.split_whitespace().map(|s| s.parse::<usize>().unwrap());
        let (n, count) = (parts.next().unwrap(), parts.next().unwrap());
        assert_eq!(enumerate_belief_frames(n).unwrap().len(), count, "n={n}");
        assert_eq!(structural_count(n), count, "n={n}");
    }
}

fn all_frames(max: usize) -> impl Iterator<Item = Frame> {
    (1..=max).flat_map(|n| enumerate_belief_frames(n).unwrap())
}

#[test]
fn components_partition_and_are_brushes() {
    for f in all_frames(4) {
        let d = f.brush_decompose().unwrap();
        let mut covered = PointSet::EMPTY;
        for c in &d.components {
            assert!((covered & c.carrier).is_empty());
            covered = covered | c.carrier;
            assert!(!c.final_cluster.is_empty());
            assert!(c.final_cluster.is_subset(c.carrier));
            assert_eq!(c.is_pin, (c.carrier - c.final_cluster).len() == 1);
            for x in c.carrier.iter() {
                assert_eq!(f.successors(x), c.final_cluster);
            }
            let names: Vec<String> = c.carrier.iter().map(|i| f.points()[i].clone()).collect();
            let pairs: Vec<(String, String)> = c
                .carrier
                .iter()
                .flat_map(|x| c.final_cluster.iter().map(move |y| (x, y)))
                .map(|(x, y)| (f.points()[x].clone(), f.points()[y].clone()))
                .collect();
            assert!(Frame::new(&names, &pairs).unwrap().check_belief_frame().is_belief_frame());
        }
        assert_eq!(covered, PointSet::full(f.len()));
    }
}

#[test]
fn similarity_is_an_equivalence_extending_the_relation() {
    for f in all_frames(4) {
        let n = f.len();
        let sim = |x: usize, y: usize| !(f.successors(x) & f.successors(y)).is_empty();
        for x in 0..n {
            assert!(sim(x, x));
            for y in 0..n {
                assert_eq!(sim(x, y), sim(y, x));
                if f.related(x, y) {
                    assert!(sim(x, y));
                }
                for z in 0..n {
                    if sim(x, y) && sim(y, z) {
                        assert!(sim(x, z));
                    }
                }
            }
        }
    }
}

#[test]
fn alexandroff_space_of_a_belief_frame() {
    for f in all_frames(3) {
        let space = f.alexandroff().unwrap();
        let d = f.brush_decompose().unwrap();
        for x in 0..f.len() {
            let c = d.component_of(x).unwrap();
            assert!(space.is_open(c.carrier));
            assert_eq!(f.successors(x), c.final_cluster);
            assert!(space.is_open(c.final_cluster));
            for a in space.whole().subsets() {
                assert_eq!(!(space.int(a) & c.final_cluster).is_empty(), c.final_cluster.is_subset(a));
                assert_eq!(c.carrier.is_subset(space.cl(a)), !(a & c.final_cluster).is_empty());
            }
        }
    }
}
