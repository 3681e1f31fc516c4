#![allow(dead_code)]

use graphflow::graph::{parse_graph_sum, GraphSum};

pub fn gamma3() -> GraphSum {
    parse_graph_sum("1 4 6  0 1 0 2 0 3 1 2 1 3 2 3\n").unwrap()
}

/// The pentagon wheel plus 5/2 of the second cocycle graph.
pub fn gamma5() -> GraphSum {
    parse_graph_sum(
        "1 6 10  0 1 0 2 0 5 1 3 1 5 2 4 2 5 3 4 3 5 4 5\n\
         5/2 6 10  0 1 0 2 0 4 1 3 1 5 2 4 2 5 3 4 3 5 4 5\n",
    )
    .unwrap()
}

pub fn beta6() -> GraphSum {
    parse_graph_sum("1 6 11  0 1 0 3 0 5 1 4 1 5 2 3 2 4 2 5 3 4 3 5 4 5\n").unwrap()
}
