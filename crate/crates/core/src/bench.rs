//! Placement benchmark over synthetic or user graphs, emitted as CSV.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use crate::graph::Graph;
use crate::placement::{place, Method, PlacementError};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRecord {
    pub graph: String,
    pub n: usize,
    pub links: usize,
    pub method: Method,
    pub kappa: usize,
    #[serde(rename = "N")]
    pub identified: usize,
    /// Wall time in milliseconds.
    pub ms: f64,
}

/// One record per method, graph and budget, in that nesting order.
pub fn bench(
    methods: &[Method],
    graphs: &[(String, Graph)],
    kappas: &[usize],
    seed: u64,
) -> Result<Vec<BenchRecord>, PlacementError> {
    let mut out = Vec::with_capacity(methods.len() * graphs.len() * kappas.len());
    for &method in methods {
        for (id, g) in graphs {
            for &kappa in kappas {
                let start = Instant::now();
                let r = place(g, method, kappa, seed)?;
                out.push(BenchRecord {
                    graph: id.clone(),
                    n: g.node_count(),
                    links: g.real_link_count(),
                    method,
                    kappa,
                    identified: r.final_score(),
                    ms: start.elapsed().as_secs_f64() * 1e3,
                });
            }
        }
    }
    Ok(out)
}

/// CSV with header `graph,n,links,method,kappa,N,ms`, even when empty.
pub fn write_csv<W: Write>(records: &[BenchRecord], w: W) -> csv::Result<()> {
    let mut wr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wr.write_record(["graph", "n", "links", "method", "kappa", "N", "ms"])?;
    for r in records {
        wr.serialize(r)?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen::{gen_random_graph, GraphModel};

    fn graphs(count: usize) -> Vec<(String, Graph)> {
        (0..count)
            .map(|i| {
                (
                    format!("g{i}"),
                    gen_random_graph(8, 12, GraphModel::Gnm, i as u64).unwrap(),
                )
            })
            .collect()
    }

    fn csv_of(records: &[BenchRecord]) -> String {
        let mut buf = Vec::new();
        write_csv(records, &mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn row_count_and_columns() {
        let recs = bench(&[Method::Gmmp, Method::RmpV], &graphs(10), &[3, 4, 5, 6], 1).unwrap();
        assert_eq!(recs.len(), 80);
        assert!(recs.iter().all(|r| r.ms >= 0.0 && r.identified <= r.links));
        let text = csv_of(&recs);
        assert_eq!(text.lines().next(), Some("graph,n,links,method,kappa,N,ms"));
        assert_eq!(text.lines().count(), 81);
        assert!(text.lines().nth(1).unwrap().starts_with("g0,8,12,gmmp,3,"));
    }

    #[test]
    fn same_seed_same_scores() {
        let gs = graphs(3);
        let a = bench(&[Method::RmpV, Method::RmpS], &gs, &[2, 3], 7).unwrap();
        let b = bench(&[Method::RmpV, Method::RmpS], &gs, &[2, 3], 7).unwrap();
        let n = |rs: &[BenchRecord]| rs.iter().map(|r| r.identified).collect::<Vec<_>>();
        assert_eq!(n(&a), n(&b));
    }

    #[test]
    fn empty_sweep_is_header_only() {
        let recs = bench(&[Method::Gmmp], &graphs(2), &[], 0).unwrap();
        assert_eq!(csv_of(&recs), "graph,n,links,method,kappa,N,ms\n");
    }
}
