//! Scratch: dump pairs that violate at k=50 but not k=100.
use tracesumm_core::scheme::{build_mapping, Scheme};
use tracesumm_core::search::{all_pairs_distances, SummaryIndex};
use tracesumm_core::synth::{generate_synthetic_log, SynthConfig};
use tracesumm_core::topic::ReductionMethod;

#[test]
#[ignore]
fn debug_cured_pairs() {
    let cfg = SynthConfig { traces: 2000, activities: 113, variants: 6, noise: 0.035, seed: 101 };
    let ts = generate_synthetic_log(&cfg).unwrap().head(300);
    let corpus = ts.full_symbols();
    let orig = all_pairs_distances(&corpus.sequences);
    let mut data = Vec::new();
    for k in [50usize, 100] {
        let scheme = Scheme::Topic { base_attribute: None, k, lambda: 0.5, method: ReductionMethod::Svd, seed: 101 };
        let built = build_mapping(&ts, &corpus, &scheme).unwrap();
        let index = SummaryIndex::build(&corpus, &built.mapping, true).unwrap();
        let seqs: Vec<Vec<u32>> = index.summaries.iter().map(|s| s.symbols.clone()).collect();
        let summ = all_pairs_distances(&seqs);
        data.push((built.mapping, seqs, summ));
    }
    let n = corpus.len();
    let (mut cured, mut fresh, mut both) = (0, 0, 0);
    let mut shown = 0;
    for i in 0..n {
        for j in i + 1..n {
            let d = orig.get(i, j);
            let v50 = data[0].2.get(i, j) > d;
            let v100 = data[1].2.get(i, j) > d;
            match (v50, v100) {
                (true, false) => cured += 1,
                (false, true) => fresh += 1,
                (true, true) => both += 1,
                _ => {}
            }
            if v50 && !v100 && shown < 3 {
                shown += 1;
                println!("pair ({i},{j}) ed={d} ed50={} ed100={}", data[0].2.get(i, j), data[1].2.get(i, j));
                println!("  p  : {:?}", corpus.sequences[i]);
                println!("  q  : {:?}", corpus.sequences[j]);
                println!("  p50: {:?}", data[0].1[i]);
                println!("  q50: {:?}", data[0].1[j]);
                println!("  p100: {:?}", data[1].1[i]);
                println!("  q100: {:?}", data[1].1[j]);
            }
        }
    }
    println!("cured={cured} fresh={fresh} stable={both}");
}
