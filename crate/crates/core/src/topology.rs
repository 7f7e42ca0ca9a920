//! Square-grid board graphs.
//!
//! Sites are numbered row-major with row 0 at the bottom edge, so on a side-10
//! board site 30 is `(row 3, col 0)`. Both board kinds share the same
//! 8-direction adjacency; the kind only matters for rendering.

use alloc::vec::Vec;

use thiserror::Error;

use crate::lud::description::Site;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoardKind {
    /// Pieces sit on line intersections.
    GoBoard,
    /// Pieces sit inside checkered cells.
    ChessBoard,
}

impl BoardKind {
    pub fn ludeme(self) -> &'static str {
        match self {
            BoardKind::GoBoard => "goBoard",
            BoardKind::ChessBoard => "chessBoard",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    N,
    NE,
    E,
    SE,
    S,
    SW,
    W,
    NW,
}

impl Direction {
    pub const ALL: [Direction; 8] = [
        Direction::N,
        Direction::NE,
        Direction::E,
        Direction::SE,
        Direction::S,
        Direction::SW,
        Direction::W,
        Direction::NW,
    ];

    /// One representative per axis: the line families E/W, N/S, NE/SW, NW/SE.
    pub const AXES: [Direction; 4] = [Direction::E, Direction::N, Direction::NE, Direction::NW];

    /// `(row, col)` step.
    pub fn offset(self) -> (i32, i32) {
        match self {
            Direction::N => (1, 0),
            Direction::NE => (1, 1),
            Direction::E => (0, 1),
            Direction::SE => (-1, 1),
            Direction::S => (-1, 0),
            Direction::SW => (-1, -1),
            Direction::W => (0, -1),
            Direction::NW => (1, -1),
        }
    }

    pub fn opposite(self) -> Direction {
        Direction::ALL[(self as usize + 4) % 8]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TopologyError {
    #[error("board side must be at least 1")]
    InvalidSize,
    #[error("coordinate out of bounds")]
    OutOfBounds,
}

const NO_SITE: u16 = u16::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    kind: BoardKind,
    side: usize,
    /// `site * 8 + direction` → neighbouring site, or [`NO_SITE`].
    neighbors: Vec<u16>,
}

impl Topology {
    pub fn new(kind: BoardKind, side: usize) -> Result<Self, TopologyError> {
        // Site ids must stay below the sentinel.
        if side == 0 || side * side >= NO_SITE as usize {
            return Err(TopologyError::InvalidSize);
        }
        let mut neighbors = Vec::with_capacity(side * side * 8);
        for site in 0..side * side {
            let (row, col) = ((site / side) as i32, (site % side) as i32);
            for dir in Direction::ALL {
                let (dr, dc) = dir.offset();
                let (r, c) = (row + dr, col + dc);
                let inside = (0..side as i32).contains(&r) && (0..side as i32).contains(&c);
                neighbors.push(if inside {
                    (r as usize * side + c as usize) as u16
                } else {
                    NO_SITE
                });
            }
        }
        Ok(Topology {
            kind,
            side,
            neighbors,
        })
    }

    pub fn kind(&self) -> BoardKind {
        self.kind
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn site_count(&self) -> usize {
        self.side * self.side
    }

    pub fn coord_to_index(&self, row: usize, col: usize) -> Result<Site, TopologyError> {
        if row < self.side && col < self.side {
            Ok(row * self.side + col)
        } else {
            Err(TopologyError::OutOfBounds)
        }
    }

    pub fn index_to_coord(&self, site: Site) -> Result<(usize, usize), TopologyError> {
        if site < self.site_count() {
            Ok((site / self.side, site % self.side))
        } else {
            Err(TopologyError::OutOfBounds)
        }
    }

    #[inline]
    pub fn neighbor(&self, site: Site, dir: Direction) -> Option<Site> {
        match self.neighbors[site * 8 + dir as usize] {
            NO_SITE => None,
            s => Some(s as usize),
        }
    }

    pub fn neighbors(&self, site: Site) -> impl Iterator<Item = Site> + '_ {
        Direction::ALL
            .into_iter()
            .filter_map(move |d| self.neighbor(site, d))
    }

    /// Successive neighbours of `from` in `dir`, nearest first, excluding `from`.
    pub fn ray(&self, from: Site, dir: Direction) -> Ray<'_> {
        Ray {
            topology: self,
            at: from,
            dir,
        }
    }
}

/// Iterator over the sites of a ray.
#[derive(Debug, Clone)]
pub struct Ray<'a> {
    topology: &'a Topology,
    at: Site,
    dir: Direction,
}

impl Iterator for Ray<'_> {
    type Item = Site;

    #[inline]
    fn next(&mut self) -> Option<Site> {
        let n = self.topology.neighbor(self.at, self.dir)?;
        self.at = n;
        Some(n)
    }
}
