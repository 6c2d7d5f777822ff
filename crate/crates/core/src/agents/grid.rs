//! Grid-world generator for agent transition systems.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AgentModel, TransitionSystem};
use crate::automata::Label;
use crate::symbols::{Alphabet, AlphabetError, SymSet};

pub type Cell = [usize; 2];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Room {
    pub name: String,
    /// Inclusive lower-left corner.
    pub from: Cell,
    /// Inclusive upper-right corner.
    pub to: Cell,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceCell {
    pub cell: Cell,
    pub services: Vec<String>,
}

/// A rectangular grid: `x` grows to the east, `y` to the north, `[0, 0]` is
/// the south-west corner.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub width: usize,
    pub height: usize,
    #[serde(default)]
    pub obstacles: Vec<Cell>,
    /// Blocked moves between adjacent cells, in both directions.
    #[serde(default)]
    pub walls: Vec<[Cell; 2]>,
    /// Moves allowed only from the first cell to the second.
    #[serde(default)]
    pub one_way: Vec<[Cell; 2]>,
    #[serde(default)]
    pub rooms: Vec<Room>,
    #[serde(default)]
    pub service_cells: Vec<ServiceCell>,
    pub initial: Cell,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GridError {
    #[error("grid dimensions must be positive")]
    Empty,
    #[error("cell [{0}, {1}] is outside the grid")]
    OutOfBounds(usize, usize),
    #[error("initial cell [{0}, {1}] is an obstacle")]
    InitialBlocked(usize, usize),
    #[error("service cell [{0}, {1}] is an obstacle")]
    ServiceBlocked(usize, usize),
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
}

pub const MOVES: [(&str, isize, isize); 4] =
    [("north", 0, 1), ("south", 0, -1), ("east", 1, 0), ("west", -1, 0)];

impl GridSpec {
    pub fn state_name(x: usize, y: usize) -> String {
        format!("c{x}_{y}")
    }

    /// Inverse of [`GridSpec::state_name`].
    pub fn cell_of(name: &str) -> Option<Cell> {
        let (x, y) = name.strip_prefix('c')?.split_once('_')?;
        Some([x.parse().ok()?, y.parse().ok()?])
    }

    pub fn service_action_name(services: &[String]) -> String {
        if services.is_empty() {
            "serve".to_string()
        } else {
            format!("serve_{}", services.join("_"))
        }
    }

    fn in_bounds(&self, c: Cell) -> bool {
        c[0] < self.width && c[1] < self.height
    }

    pub fn is_free(&self, c: Cell) -> bool {
        self.in_bounds(c) && !self.obstacles.contains(&c)
    }

    pub fn room_names(&self) -> Vec<String> {
        let mut names: Vec<String> = Vec::new();
        for r in &self.rooms {
            if !names.contains(&r.name) {
                names.push(r.name.clone());
            }
        }
        names
    }

    pub fn rooms_of(&self, c: Cell) -> impl Iterator<Item = &str> {
        self.rooms
            .iter()
            .filter(move |r| (r.from[0]..=r.to[0]).contains(&c[0]) && (r.from[1]..=r.to[1]).contains(&c[1]))
            .map(|r| r.name.as_str())
    }

    pub fn allows_move(&self, from: Cell, to: Cell) -> bool {
        if !self.is_free(from) || !self.is_free(to) {
            return false;
        }
        let blocked = |pair: &[Cell; 2]| (pair[0] == from && pair[1] == to) || (pair[0] == to && pair[1] == from);
        if self.walls.iter().any(blocked) {
            return false;
        }
        !self.one_way.iter().any(|p| p[0] == to && p[1] == from)
    }

    fn check_cell(&self, c: Cell) -> Result<(), GridError> {
        if self.in_bounds(c) {
            Ok(())
        } else {
            Err(GridError::OutOfBounds(c[0], c[1]))
        }
    }
}

/// Builds a grid agent: one state per free cell, the four compass moves where
/// not blocked, a `stay` self-loop everywhere, room propositions per cell, and
/// a service self-loop action at every service cell.
pub fn build_grid_agent(
    name: &str,
    index: usize,
    grid: &GridSpec,
    service_alphabet: &Alphabet,
) -> Result<AgentModel, GridError> {
    if grid.width == 0 || grid.height == 0 {
        return Err(GridError::Empty);
    }
    for c in grid.obstacles.iter().chain(grid.walls.iter().flatten()).chain(grid.one_way.iter().flatten()) {
        grid.check_cell(*c)?;
    }
    for r in &grid.rooms {
        grid.check_cell(r.from)?;
        grid.check_cell(r.to)?;
    }
    grid.check_cell(grid.initial)?;
    if !grid.is_free(grid.initial) {
        return Err(GridError::InitialBlocked(grid.initial[0], grid.initial[1]));
    }

    let props = Alphabet::new(grid.room_names())?;
    let mut ts = TransitionSystem::new(props.clone());
    let mut ids = vec![vec![None; grid.height]; grid.width];
    for y in 0..grid.height {
        for x in 0..grid.width {
            if grid.is_free([x, y]) {
                let label = props.set_of(grid.rooms_of([x, y]))?;
                ids[x][y] = Some(ts.add_state(GridSpec::state_name(x, y), label));
            }
        }
    }
    ts.initial = ids[grid.initial[0]][grid.initial[1]].unwrap();

    let mut action_labels = Vec::new();
    let stay = ts.action("stay");
    action_labels.push(Label::Silent(index));
    let move_ids: Vec<_> = MOVES
        .iter()
        .map(|(n, _, _)| {
            action_labels.push(Label::Silent(index));
            ts.action(n)
        })
        .collect();

    for y in 0..grid.height {
        for x in 0..grid.width {
            let Some(s) = ids[x][y] else { continue };
            ts.add_edge(s, stay, s);
            for (k, (_, dx, dy)) in MOVES.iter().enumerate() {
                let (nx, ny) = (x as isize + dx, y as isize + dy);
                if nx < 0 || ny < 0 {
                    continue;
                }
                let to = [nx as usize, ny as usize];
                if grid.allows_move([x, y], to) {
                    ts.add_edge(s, move_ids[k], ids[to[0]][to[1]].unwrap());
                }
            }
        }
    }

    let mut services = SymSet::EMPTY;
    for sc in &grid.service_cells {
        grid.check_cell(sc.cell)?;
        let Some(s) = ids[sc.cell[0]][sc.cell[1]] else {
            return Err(GridError::ServiceBlocked(sc.cell[0], sc.cell[1]));
        };
        let set = service_alphabet.set_of(sc.services.iter().map(String::as_str))?;
        services = services.union(set);
        let before = ts.num_actions();
        let a = ts.action(&GridSpec::service_action_name(&sc.services));
        if a == before {
            action_labels.push(Label::Services(set));
        }
        if ts.successor(s, a).is_none() {
            ts.add_edge(s, a, s);
        }
    }

    Ok(AgentModel { name: name.to_string(), index, ts, services, action_labels, stay })
}
