use std::io::Write;

use resample_core::data::{load_csv, load_paired_csv};
use resample_core::{Dataset, Error, Group};

fn write(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn grouped_file_round_trip() {
    let f = write("score,diet\n74,Vegetarian\n65,Vegetarian\n69,Omnivore\n37,Omnivore\n57,Vegetarian\n26,Omnivore\n");
    let Dataset::Grouped(g) = load_csv(f.path(), "score", Some("diet")).unwrap() else {
        panic!("expected grouped data");
    };
    assert_eq!(g.name(Group::First), "Vegetarian");
    assert_eq!(g.count(Group::Second), 3);

    let out = tempfile::NamedTempFile::new().unwrap();
    g.write_csv(out.reopen().unwrap(), "score", "diet").unwrap();
    let Dataset::Grouped(back) = load_csv(out.path(), "score", Some("diet")).unwrap() else {
        panic!("expected grouped data");
    };
    assert_eq!(back, g);
}

#[test]
fn single_column_file() {
    let f = write("value\n1\n2.5\n-3\n");
    let Dataset::Sample(s) = load_csv(f.path(), "value", None).unwrap() else {
        panic!("expected a sample");
    };
    assert_eq!(s.values(), &[1.0, 2.5, -3.0]);
}

#[test]
fn file_errors_are_specific() {
    assert!(matches!(
        load_csv("/no/such/file.csv", "value", None),
        Err(Error::Io { .. })
    ));
    let f = write("value\n1\nabc\n");
    assert!(matches!(
        load_csv(f.path(), "value", None),
        Err(Error::BadNumber { .. })
    ));
    let f = write("other\n1\n");
    assert!(matches!(
        load_csv(f.path(), "value", None),
        Err(Error::MissingColumn(_))
    ));
    let f = write("value,g\n1,a\n2,b\n3,c\n");
    assert!(matches!(
        load_csv(f.path(), "value", Some("g")),
        Err(Error::GroupCount { .. })
    ));
}

#[test]
fn paired_file() {
    let f = write("x,y\n1,2\n2,4\n3,7\n");
    let p = load_paired_csv(f.path(), "x", "y").unwrap();
    assert_eq!(p.y(), &[2.0, 4.0, 7.0]);
}
