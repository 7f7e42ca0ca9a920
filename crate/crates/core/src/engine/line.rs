//! Straight-line run detection along the four board axes.

use crate::lud::description::{PieceId, Player, Site};
use crate::topology::{Direction, Topology};

#[inline]
fn owned(contents: &[Option<PieceId>], owners: &[Option<Player>], site: Site, player: Player) -> bool {
    contents[site].is_some_and(|p| owners[p.0 as usize] == Some(player))
}

fn run(
    topology: &Topology,
    contents: &[Option<PieceId>],
    owners: &[Option<Player>],
    from: Site,
    dir: Direction,
    player: Player,
) -> usize {
    topology
        .ray(from, dir)
        .take_while(|&s| owned(contents, owners, s, player))
        .count()
}

/// True iff `player` owns a maximal run of at least `length` sites along
/// E/W, N/S, NE/SW or NW/SE. Runs longer than `length` count.
pub fn detect_line(
    topology: &Topology,
    contents: &[Option<PieceId>],
    owners: &[Option<Player>],
    player: Player,
    length: usize,
) -> bool {
    for site in 0..topology.site_count() {
        if !owned(contents, owners, site, player) {
            continue;
        }
        for dir in Direction::AXES {
            // Only count from the first site of each run.
            let starts_run = topology
                .neighbor(site, dir.opposite())
                .is_none_or(|p| !owned(contents, owners, p, player));
            if starts_run && 1 + run(topology, contents, owners, site, dir, player) >= length {
                return true;
            }
        }
    }
    false
}

/// True iff a run of at least `length` sites owned by `player` passes through `site`.
pub fn line_through(
    topology: &Topology,
    contents: &[Option<PieceId>],
    owners: &[Option<Player>],
    site: Site,
    player: Player,
    length: usize,
) -> bool {
    if !owned(contents, owners, site, player) {
        return false;
    }
    Direction::AXES.into_iter().any(|dir| {
        let total = 1
            + run(topology, contents, owners, site, dir, player)
            + run(topology, contents, owners, site, dir.opposite(), player);
        total >= length
    })
}
