mod common;

use polyindex::indexdb::{load_database, save_database, VoteMode};

#[test]
fn two_queries_give_the_schematic_votes() {
    let (db, graphs) = common::schematic();
    let tally = db.recognize(&graphs[..2]);
    assert_eq!(tally.score("CV11"), Some(1));
    assert_eq!(tally.score("CV12"), Some(2));
    assert_eq!(tally.score("CV21"), Some(2));
    assert_eq!(tally.score("CV22"), Some(0));
    assert_eq!(tally.leaders(), vec!["CV12", "CV21"]);
}

#[test]
fn schematic_layers() {
    let (db, graphs) = common::schematic();
    assert_eq!(db.objects().len(), 2);
    assert_eq!(db.views().len(), 4);
    assert_eq!(db.entry_count(), 4);
    let shared = db.lookup(&db.params().subgraph_signatures(&graphs[0])[0].1).unwrap();
    let holders: Vec<&str> = shared.views.iter().map(|&(cv, _)| db.views()[cv].id.as_str()).collect();
    assert_eq!(holders, ["CV11", "CV12", "CV21"]);
    assert!(db.accidents().is_empty());
}

#[test]
fn per_occurrence_voting_on_the_schematic() {
    let (db, graphs) = common::schematic();
    let per_view = db.recognize(&graphs[..2]);
    let per_occurrence = db.recognize_with(&graphs[..2], db.params().neighborhoods, VoteMode::PerOccurrence);
    // Every graph occurs once per view here, so both modes agree.
    assert_eq!(per_view.scores(), per_occurrence.scores());
    assert_eq!(per_view.ranked(), per_occurrence.ranked());
}

#[test]
fn schematic_survives_a_round_trip() {
    let (db, graphs) = common::schematic();
    let back = load_database(&save_database(&db).unwrap()).unwrap();
    assert_eq!(back, db);
    assert_eq!(back.recognize(&graphs[..2]).scores(), db.recognize(&graphs[..2]).scores());
}
