use std::collections::BTreeMap;

use chrono::{Days, NaiveDate};
use comednet::atc::AtcCode;
use comednet::graph::Network;
use comednet::ingest::{self, DispensingRecord, EpisodeParams, ExclusionList};
use comednet_testkit::{self as kit, Fill};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn date(s: &str) -> NaiveDate {
    NaiveDate::parse_from_str(s, "%Y-%m-%d").unwrap()
}

fn record(f: &Fill) -> DispensingRecord {
    DispensingRecord {
        patient_id: f.patient.clone(),
        atc: AtcCode::parse(&f.atc).unwrap(),
        drug_name: None,
        dispense_date: f.date,
        ddd_quantity: f.ddd as f64,
        extra: BTreeMap::new(),
    }
}

fn fill(patient: &str, atc: &str, day: &str, ddd: u64) -> Fill {
    Fill {
        patient: patient.into(),
        atc: atc.into(),
        date: date(day),
        ddd,
    }
}

fn episodes(fills: &[Fill]) -> Vec<(String, String, NaiveDate, NaiveDate)> {
    let records: Vec<_> = fills.iter().map(record).collect();
    ingest::build_episodes(&records, &EpisodeParams::default())
        .unwrap()
        .into_iter()
        .map(|e| (e.patient_id, e.atc.as_str().to_owned(), e.start_date, e.end_date))
        .collect()
}

#[test]
fn single_fill_gets_thirty_six_days() {
    let fills = [fill("P1", "N05CF01", "2012-12-10", 30)];
    let want = kit::episodes_oracle(&fills, (6, 5), 14);
    assert_eq!(episodes(&fills), want);
    assert_eq!(want[0].2, date("2012-12-10"));
    assert_eq!(want[0].3, date("2013-01-14"));
    assert_eq!((want[0].3 - want[0].2).num_days() + 1, 36);
}

#[test]
fn twelve_day_gap_merges() {
    let fills = [
        fill("P1", "N05CF01", "2012-11-01", 10),
        fill("P1", "N05CF01", "2012-11-25", 10),
    ];
    let want = kit::episodes_oracle(&fills, (6, 5), 14);
    assert_eq!(episodes(&fills), want);
    assert_eq!(want.len(), 1);
    assert_eq!((want[0].2, want[0].3), (date("2012-11-01"), date("2012-12-06")));
}

#[test]
fn fifteen_day_gap_splits() {
    let fills = [
        fill("P1", "N05CF01", "2012-11-01", 10),
        fill("P1", "N05CF01", "2012-11-28", 10),
    ];
    let want = kit::episodes_oracle(&fills, (6, 5), 14);
    assert_eq!(episodes(&fills), want);
    assert_eq!(want.len(), 2);
    assert_eq!(want[0].3, date("2012-11-12"));
    assert_eq!(want[1].2, date("2012-11-28"));
}

const DRUGS: [&str; 8] = [
    "A02BC01", "B01AC06", "C07AB02", "C10AA01", "N02BE01", "N05CF01", "R03AC02", "S01ED01",
];

fn random_fills(rng: &mut ChaCha8Rng, patients: usize) -> Vec<Fill> {
    let origin = date("2012-06-01");
    let mut fills = Vec::new();
    for p in 0..patients {
        for _ in 0..rng.gen_range(0..12) {
            fills.push(Fill {
                patient: format!("P{p:03}"),
                atc: DRUGS[rng.gen_range(0..DRUGS.len())].into(),
                date: origin + Days::new(rng.gen_range(0..240)),
                ddd: rng.gen_range(1..=100),
            });
        }
    }
    fills
}

#[test]
fn random_cohorts_match_day_level_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..100 {
        let fills = random_fills(&mut rng, 20);
        assert_eq!(episodes(&fills), kit::episodes_oracle(&fills, (6, 5), 14));
    }
}

#[test]
fn other_parameters_match_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for (factor, gap) in [((1, 1), 0u32), ((3, 2), 7), ((5, 4), 30)] {
        let fills = random_fills(&mut rng, 30);
        let records: Vec<_> = fills.iter().map(record).collect();
        let params = EpisodeParams {
            adherence_factor: factor.0 as f64 / factor.1 as f64,
            gap_days: gap,
        };
        let got: Vec<_> = ingest::build_episodes(&records, &params)
            .unwrap()
            .into_iter()
            .map(|e| (e.patient_id, e.atc.as_str().to_owned(), e.start_date, e.end_date))
            .collect();
        assert_eq!(got, kit::episodes_oracle(&fills, factor, u64::from(gap)));
    }
}

#[test]
fn edge_weights_sum_to_patient_pair_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let index = date("2013-01-01");
    for _ in 0..100 {
        let fills = random_fills(&mut rng, 40);
        let records: Vec<_> = fills.iter().map(record).collect();
        let eps = ingest::build_episodes(&records, &EpisodeParams::default()).unwrap();
        let active = ingest::active_at(&eps, index);
        let edges = ingest::build_edge_list(&active, &ExclusionList::default());

        let total: u64 = edges.iter().map(|e| e.weight).sum();
        assert_eq!(total, kit::pair_count(active.values().map(|s| s.len())));
        assert!(edges.iter().all(|e| e.drug_a < e.drug_b && e.weight >= 1));

        // Excluding a drug removes exactly its pairs.
        let dropped = DRUGS[rng.gen_range(0..DRUGS.len())];
        let excl = ExclusionList::new([dropped]).unwrap();
        let kept = ingest::build_edge_list(&active, &excl);
        let want = kit::pair_count(active.values().map(|s| s.iter().filter(|d| *d != dropped).count()));
        assert_eq!(kept.iter().map(|e| e.weight).sum::<u64>(), want);

        Network::from_edge_list(&edges, false, true).unwrap();
    }
}
