//! Trajectory drawings for grid scenarios.

use std::fmt::Write;

use thiserror::Error;

use teamsynth::agents::{Cell, GridSpec, Scenario};
use teamsynth::global::Strategy;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("agent {0} has no grid; only grid scenarios can be rendered")]
    NotGrid(String),
    #[error("agent {0} uses a grid of a different size")]
    SizeMismatch(String),
    #[error("agent {0}: state {1} is not a grid cell")]
    NotACell(String, String),
}

struct Track {
    name: String,
    /// Visited cells in order, ending where the cycle starts again.
    path: Vec<Cell>,
    /// Cells of service steps taken together with other agents.
    stars: Vec<Cell>,
}

pub struct Scene {
    width: usize,
    height: usize,
    obstacles: Vec<Cell>,
    walls: Vec<[Cell; 2]>,
    services: Vec<(Cell, Vec<String>)>,
    tracks: Vec<Track>,
}

const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];
const CELL: f64 = 40.0;
const MARGIN: f64 = 20.0;

impl Scene {
    pub fn new(sc: &Scenario, strategies: &[Strategy]) -> Result<Scene, RenderError> {
        let grids: Vec<&GridSpec> = sc
            .agents
            .iter()
            .zip(&sc.grids)
            .map(|(a, g)| g.as_ref().ok_or_else(|| RenderError::NotGrid(a.name.clone())))
            .collect::<Result<_, _>>()?;
        let (width, height) = grids.first().map_or((0, 0), |g| (g.width, g.height));
        let mut scene = Scene { width, height, obstacles: vec![], walls: vec![], services: vec![], tracks: vec![] };
        for (g, a) in grids.iter().zip(&sc.agents) {
            if (g.width, g.height) != (width, height) {
                return Err(RenderError::SizeMismatch(a.name.clone()));
            }
            for &c in &g.obstacles {
                if !scene.obstacles.contains(&c) {
                    scene.obstacles.push(c);
                }
            }
            for &w in &g.walls {
                if !scene.walls.contains(&w) {
                    scene.walls.push(w);
                }
            }
            for s in &g.service_cells {
                match scene.services.iter_mut().find(|(c, _)| *c == s.cell) {
                    Some((_, names)) => names.extend(s.services.iter().filter(|n| !names.contains(n)).cloned().collect::<Vec<_>>()),
                    None => scene.services.push((s.cell, s.services.clone())),
                }
            }
        }
        for s in strategies {
            let a = &sc.agents[s.agent];
            let cell = |state| {
                let name = a.ts.state_name(state);
                GridSpec::cell_of(name).ok_or_else(|| RenderError::NotACell(a.name.clone(), name.to_string()))
            };
            let mut path = Vec::new();
            let mut stars = Vec::new();
            for st in s.steps() {
                let c = cell(st.state)?;
                if path.last() != Some(&c) {
                    path.push(c);
                }
                if !a.label_of(st.action).is_silent() && !st.sync.is_singleton() && !stars.contains(&c) {
                    stars.push(c);
                }
            }
            if let Some(first) = s.cycle.first() {
                let c = cell(first.state)?;
                if path.last() != Some(&c) {
                    path.push(c);
                }
            }
            scene.tracks.push(Track { name: a.name.clone(), path, stars });
        }
        Ok(scene)
    }

    fn background(&self) -> Vec<Vec<char>> {
        let mut rows = vec![vec!['.'; self.width]; self.height];
        for (c, _) in &self.services {
            rows[self.height - 1 - c[1]][c[0]] = 'S';
        }
        for c in &self.obstacles {
            rows[self.height - 1 - c[1]][c[0]] = '#';
        }
        rows
    }

    fn put(&self, rows: &mut [Vec<char>], c: Cell, g: char) {
        rows[self.height - 1 - c[1]][c[0]] = g;
    }

    /// One frame per agent and a combined frame, each `height` lines of
    /// `width` glyphs, north at the top.
    ///
    /// `.` free, `#` obstacle, `S` service cell, `o` visited, `@` start,
    /// `*` joint service; in the team frame digits name the agents and `+`
    /// marks shared cells.
    pub fn ascii(&self) -> String {
        let mut out = String::new();
        let mut frame = |title: String, rows: Vec<Vec<char>>| {
            writeln!(out, "== {title}").unwrap();
            for r in rows {
                out.extend(r);
                out.push('\n');
            }
        };
        for t in &self.tracks {
            let mut rows = self.background();
            for &c in &t.path {
                self.put(&mut rows, c, 'o');
            }
            if let Some(&c) = t.path.first() {
                self.put(&mut rows, c, '@');
            }
            for &c in &t.stars {
                self.put(&mut rows, c, '*');
            }
            frame(format!("agent {}", t.name), rows);
        }
        let mut rows = self.background();
        let mut owner: Vec<Vec<Option<usize>>> = vec![vec![None; self.width]; self.height];
        for (k, t) in self.tracks.iter().enumerate() {
            for &c in &t.path {
                let o = &mut owner[self.height - 1 - c[1]][c[0]];
                let g = match *o {
                    Some(j) if j != k => '+',
                    _ => std::char::from_digit((k as u32 + 1) % 36, 36).unwrap_or('?'),
                };
                *o = Some(k);
                if rows[self.height - 1 - c[1]][c[0]] != '+' {
                    self.put(&mut rows, c, g);
                }
            }
        }
        for t in &self.tracks {
            for &c in &t.stars {
                self.put(&mut rows, c, '*');
            }
        }
        frame("team".to_string(), rows);
        out
    }

    fn center(&self, c: Cell) -> (f64, f64) {
        (MARGIN + (c[0] as f64 + 0.5) * CELL, MARGIN + ((self.height - 1 - c[1]) as f64 + 0.5) * CELL)
    }

    pub fn svg(&self) -> String {
        let (w, h) = (2.0 * MARGIN + self.width as f64 * CELL, 2.0 * MARGIN + self.height as f64 * CELL + 20.0);
        let mut s = String::new();
        writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
        writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
        let cell_rect = |s: &mut String, c: Cell, class: &str, fill: &str| {
            let (x, y) = self.center(c);
            writeln!(
                s,
                r#"<rect class="{class}" x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{fill}"/>"#,
                x - CELL / 2.0,
                y - CELL / 2.0
            )
            .unwrap();
        };
        for (c, names) in &self.services {
            cell_rect(&mut s, *c, "service", "#ffe9a8");
            let (x, y) = self.center(*c);
            writeln!(s, r#"<text x="{x}" y="{}" font-size="9" text-anchor="middle">{}</text>"#, y - CELL / 2.0 + 10.0, names.join(",")).unwrap();
        }
        for &c in &self.obstacles {
            cell_rect(&mut s, c, "obstacle", "#555555");
        }
        for i in 0..=self.width {
            let x = MARGIN + i as f64 * CELL;
            writeln!(s, r##"<line x1="{x}" y1="{MARGIN}" x2="{x}" y2="{}" stroke="#cccccc"/>"##, MARGIN + self.height as f64 * CELL).unwrap();
        }
        for j in 0..=self.height {
            let y = MARGIN + j as f64 * CELL;
            writeln!(s, r##"<line x1="{MARGIN}" y1="{y}" x2="{}" y2="{y}" stroke="#cccccc"/>"##, MARGIN + self.width as f64 * CELL).unwrap();
        }
        for [a, b] in &self.walls {
            let ((ax, ay), (bx, by)) = (self.center(*a), self.center(*b));
            let (mx, my) = ((ax + bx) / 2.0, (ay + by) / 2.0);
            // the wall runs across the shared edge
            let (dx, dy) = if ay == by { (0.0, CELL / 2.0) } else { (CELL / 2.0, 0.0) };
            writeln!(
                s,
                r#"<line class="wall" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="4"/>"#,
                mx - dx,
                my - dy,
                mx + dx,
                my + dy
            )
            .unwrap();
        }
        let n = self.tracks.len() as f64;
        for (k, t) in self.tracks.iter().enumerate() {
            let color = PALETTE[k % PALETTE.len()];
            let off = (k as f64 - (n - 1.0) / 2.0) * 4.0;
            let pt = |c: Cell| {
                let (x, y) = self.center(c);
                (x + off, y + off)
            };
            if t.path.len() > 1 {
                let points: Vec<String> = t.path.iter().map(|&c| pt(c)).map(|(x, y)| format!("{x},{y}")).collect();
                writeln!(
                    s,
                    r#"<polyline class="trajectory" data-agent="{}" points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                    t.name,
                    points.join(" ")
                )
                .unwrap();
            }
            if let Some(&c) = t.path.first() {
                let (x, y) = pt(c);
                writeln!(s, r#"<circle class="marker" data-agent="{}" cx="{x}" cy="{y}" r="5" fill="{color}"/>"#, t.name).unwrap();
            }
            for &c in &t.stars {
                let (x, y) = pt(c);
                writeln!(s, r#"<polygon class="star" data-agent="{}" points="{}" fill="{color}" stroke="black"/>"#, t.name, star(x, y, 10.0)).unwrap();
            }
            writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="12" fill="{color}">{}</text>"#,
                MARGIN + k as f64 * 80.0,
                h - 8.0,
                t.name
            )
            .unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

fn star(x: f64, y: f64, r: f64) -> String {
    (0..10)
        .map(|i| {
            let radius = if i % 2 == 0 { r } else { r * 0.45 };
            let angle = std::f64::consts::PI * (i as f64 / 5.0 - 0.5);
            format!("{:.2},{:.2}", x + radius * angle.cos(), y + radius * angle.sin())
        })
        .collect::<Vec<_>>()
        .join(" ")
}
