mod common;

use std::fs;

use common::{read, write};
use gravity_core::symmetrize;
use gravity_toolkit::ingest::{load_countries, load_dataset, load_trades, write_countries, write_trades, InputFiles, LoadReport};
use gravity_toolkit::ToolkitError;
use tempfile::TempDir;

const CAPITALS: &str = "iso,capital_name,lat_deg,lon_deg\nAAA,Alpha,10,20\nBBB,Beta,-5,100\nCCC,Gamma,40,-70\n";

fn setup(gdp: &str, capitals: &str) -> TempDir {
    let dir = TempDir::new().unwrap();
    write(&dir.path().join("gdp.csv"), gdp);
    write(&dir.path().join("capitals.csv"), capitals);
    dir
}

#[test]
fn countries_are_the_intersection() {
    let dir = setup("iso,year,gdp_usd\nAAA,2014,100\nBBB,2014,200\n", CAPITALS);
    let (table, report) = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014).unwrap();
    let isos: Vec<_> = table.records().iter().map(|r| r.iso.as_str()).collect();
    assert_eq!(isos, ["AAA", "BBB"]);
    assert_eq!(report.dropped_no_gdp, 1);
    assert_eq!(table.records()[1].gdp_usd, 200.0);
}

#[test]
fn empty_intersection_is_an_error() {
    let dir = setup("iso,year,gdp_usd\nXXX,2014,100\n", CAPITALS);
    let err = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014).unwrap_err();
    assert!(matches!(err, ToolkitError::NoCommonCountries { .. }));
    assert!(err.to_string().contains("no countries in common"));
}

#[test]
fn iso_codes_are_uppercased_and_other_years_ignored() {
    let dir = setup("iso,year,gdp_usd\naaa,2014,100\nbbb,2013,5\nbbb,2014,7\n", CAPITALS);
    let (table, _) = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014).unwrap();
    assert_eq!(table.index_of("AAA"), Some(0));
    assert_eq!(table.records()[1].gdp_usd, 7.0);
}

#[test]
fn non_positive_gdp_rows_are_counted() {
    let dir = setup("iso,year,gdp_usd\nAAA,2014,0\nBBB,2014,-3\nCCC,2014,9\n", CAPITALS);
    let (table, report) = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014).unwrap();
    assert_eq!(table.len(), 1);
    assert_eq!(report.gdp_rejected, 2);
}

#[test]
fn duplicate_iso_names_the_line() {
    let dir = setup("iso,year,gdp_usd\nAAA,2014,1\nBBB,2014,2\nAAA,2014,3\n", CAPITALS);
    let err = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014).unwrap_err();
    match err {
        ToolkitError::DuplicateIso { line, iso, .. } => assert_eq!((line, iso.as_str()), (4, "AAA")),
        other => panic!("{other}"),
    }
}

#[test]
fn malformed_rows_name_file_and_line() {
    let dir = setup("iso,year,gdp_usd\nAAA,2014,1\nBBB,2014,lots\n", CAPITALS);
    let err = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014).unwrap_err();
    let msg = err.to_string();
    assert!(matches!(err, ToolkitError::Parse { line: 3, .. }), "{msg}");
    assert!(msg.contains("gdp.csv:3"), "{msg}");

    let dir = setup("iso,year,gdp_usd\nAAA,2014,1\n", "iso,capital_name,lat_deg,lon_deg\nAAA,Alpha,95,0\n");
    let err = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014).unwrap_err();
    assert!(matches!(err, ToolkitError::Parse { line: 2, .. }), "{err}");

    let dir = setup("iso,gdp_usd\nAAA,1\n", CAPITALS);
    let err = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014).unwrap_err();
    assert!(err.to_string().contains("missing column `year`"), "{err}");
}

fn three_countries() -> TempDir {
    setup("iso,year,gdp_usd\nAAA,2014,100\nBBB,2014,200\nCCC,2014,300\n", CAPITALS)
}

fn trades(dir: &TempDir, text: &str) -> gravity_toolkit::Result<(gravity_core::DirectedTradeMatrix, Vec<bool>, LoadReport)> {
    let (table, mut report) = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014)?;
    write(&dir.path().join("trade.csv"), text);
    let (ex, traders) = load_trades(&dir.path().join("trade.csv"), &table, &mut report)?;
    Ok((ex, traders, report))
}

#[test]
fn duplicate_trade_rows_are_summed() {
    let dir = three_countries();
    let (ex, _, report) =
        trades(&dir, "exporter_iso,importer_iso,year,value_usd\nAAA,BBB,2014,5\nAAA,BBB,2014,7\n").unwrap();
    assert_eq!(ex.get(0, 1), 12.0);
    assert_eq!(ex.get(1, 0), 0.0);
    assert_eq!(report.trade_duplicates_summed, 1);
}

#[test]
fn unknown_iso_rows_are_skipped_and_counted() {
    let dir = three_countries();
    let (ex, _, report) =
        trades(&dir, "exporter_iso,importer_iso,year,value_usd\nAAA,ZZZ,2014,5\nBBB,CCC,2014,1\n").unwrap();
    assert_eq!(report.trade_unknown_iso, 1);
    assert_eq!(ex.get(1, 2), 1.0);
}

#[test]
fn negative_value_names_the_line() {
    let dir = three_countries();
    let err = trades(&dir, "exporter_iso,importer_iso,year,value_usd\nAAA,BBB,2014,5\nBBB,AAA,2014,-1\n").unwrap_err();
    assert!(matches!(err, ToolkitError::Parse { line: 3, .. }), "{err}");
    assert!(err.to_string().contains("trade.csv:3"));
}

#[test]
fn ten_row_fixture_matches_hand_built_matrix() {
    let dir = three_countries();
    let text = "exporter_iso,importer_iso,year,value_usd
AAA,BBB,2014,10
BBB,AAA,2014,4
aaa,ccc,2014,2.5
CCC,AAA,2014,1
BBB,CCC,2014,3
CCC,BBB,2014,6
BBB,BBB,2014,99
AAA,BBB,2013,1000
DDD,AAA,2014,8
CCC,BBB,2014,0.5
";
    let (ex, traders, report) = trades(&dir, text).unwrap();
    let want = [[0.0, 10.0, 2.5], [4.0, 0.0, 3.0], [1.0, 6.5, 0.0]];
    for (i, row) in want.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            assert_eq!(ex.get(i, j), v, "ex[{i}][{j}]");
        }
    }
    assert_eq!(traders, [true, true, true]);
    assert_eq!(
        (report.trade_self, report.trade_other_year, report.trade_unknown_iso, report.trade_duplicates_summed),
        (1, 1, 1, 1)
    );
    let f = symmetrize(&ex);
    assert_eq!((f.get(0, 1), f.get(0, 2), f.get(1, 2)), (14.0, 3.5, 9.5));
}

#[test]
fn countries_without_trade_are_dropped() {
    let dir = three_countries();
    write(&dir.path().join("trade.csv"), "exporter_iso,importer_iso,year,value_usd\nAAA,CCC,2014,5\n");
    let files = InputFiles {
        gdp: dir.path().join("gdp.csv"),
        capitals: dir.path().join("capitals.csv"),
        trade: dir.path().join("trade.csv"),
    };
    let data = load_dataset(&files, 2014).unwrap();
    assert_eq!(data.table.len(), 2);
    assert_eq!(data.report.dropped_no_trade, 1);
    assert_eq!(data.exports.get(0, 1), 5.0);
}

#[test]
fn canonical_csv_round_trips_byte_identically() {
    let dir = setup(
        "iso,year,gdp_usd\nAAA,2014,123456789.125\nBBB,2014,2.5e13\nCCC,2014,0.1\n",
        "iso,capital_name,lat_deg,lon_deg\nAAA,\"Alpha, City\",10.25,-179.5\nBBB,Beta,-5,100\nCCC,Gamma,90,180\n",
    );
    let (table, _) = load_countries(&dir.path().join("gdp.csv"), &dir.path().join("capitals.csv"), 2014).unwrap();
    write(
        &dir.path().join("trade.csv"),
        "exporter_iso,importer_iso,year,value_usd\nAAA,BBB,2014,1.5\nCCC,AAA,2014,1e20\n",
    );
    let mut report = LoadReport::default();
    let (ex, _) = load_trades(&dir.path().join("trade.csv"), &table, &mut report).unwrap();

    let out1 = TempDir::new().unwrap();
    let p = |d: &TempDir, f: &str| d.path().join(f);
    write_countries(&table, &p(&out1, "gdp.csv"), &p(&out1, "capitals.csv")).unwrap();
    write_trades(&table, &ex, &p(&out1, "trade.csv")).unwrap();

    let (table2, _) = load_countries(&p(&out1, "gdp.csv"), &p(&out1, "capitals.csv"), 2014).unwrap();
    let (ex2, _) = load_trades(&p(&out1, "trade.csv"), &table2, &mut LoadReport::default()).unwrap();
    assert_eq!(table2, table);
    assert_eq!(ex2, ex);

    let out2 = TempDir::new().unwrap();
    write_countries(&table2, &p(&out2, "gdp.csv"), &p(&out2, "capitals.csv")).unwrap();
    write_trades(&table2, &ex2, &p(&out2, "trade.csv")).unwrap();
    for f in ["gdp.csv", "capitals.csv", "trade.csv"] {
        assert_eq!(fs::read(p(&out1, f)).unwrap(), fs::read(p(&out2, f)).unwrap(), "{f}");
    }
    assert!(read(&p(&out1, "capitals.csv")).contains("\"Alpha, City\""));
}
