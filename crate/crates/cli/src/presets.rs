//! Checked-in configurations for the three worked models, one per temperature panel.

use std::fmt;

use crate::config::{ConfigError, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    /// Two spin-5/2 bath, spin-5/2 probe.
    Fig2,
    /// Four spin-1/2 long-range bath, spin-1/2 probe.
    Fig4,
    /// Ten spin-1 ring, spin-1/2 probe.
    Fig6,
}

impl Figure {
    pub const ALL: [Figure; 3] = [Figure::Fig2, Figure::Fig4, Figure::Fig6];

    pub fn id(self) -> &'static str {
        match self {
            Figure::Fig2 => "fig2",
            Figure::Fig4 => "fig4",
            Figure::Fig6 => "fig6",
        }
    }

    /// `(panel, temperature label, config JSON)` for panels a–d.
    pub fn panels(self) -> [Panel; 4] {
        match self {
            Figure::Fig2 => [
                Panel::new(self, 'a', "T = inf", include_str!("../presets/fig2_a.json")),
                Panel::new(self, 'b', "T = 32J", include_str!("../presets/fig2_b.json")),
                Panel::new(self, 'c', "T = 8J", include_str!("../presets/fig2_c.json")),
                Panel::new(self, 'd', "T = J", include_str!("../presets/fig2_d.json")),
            ],
            Figure::Fig4 => [
                Panel::new(self, 'a', "T = inf", include_str!("../presets/fig4_a.json")),
                Panel::new(self, 'b', "T = 8J", include_str!("../presets/fig4_b.json")),
                Panel::new(self, 'c', "T = J/2", include_str!("../presets/fig4_c.json")),
                Panel::new(self, 'd', "T = J/16", include_str!("../presets/fig4_d.json")),
            ],
            Figure::Fig6 => [
                Panel::new(self, 'a', "T = inf", include_str!("../presets/fig6_a.json")),
                Panel::new(self, 'b', "T = 8J", include_str!("../presets/fig6_b.json")),
                Panel::new(self, 'c', "T = 2J", include_str!("../presets/fig6_c.json")),
                Panel::new(self, 'd', "T = J/4", include_str!("../presets/fig6_d.json")),
            ],
        }
    }
}

impl fmt::Display for Figure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Panel {
    pub figure: Figure,
    pub panel: char,
    pub temperature: &'static str,
    pub json: &'static str,
}

impl Panel {
    const fn new(figure: Figure, panel: char, temperature: &'static str, json: &'static str) -> Self {
        Panel { figure, panel, temperature, json }
    }

    pub fn config(&self) -> Result<RunConfig, ConfigError> {
        RunConfig::from_json(self.json)
    }

    /// `fig2(a)` style label.
    pub fn label(&self) -> String {
        format!("{}({})", self.figure, self.panel)
    }
}

/// All twelve panels in figure order.
pub fn all_panels() -> Vec<Panel> {
    Figure::ALL.iter().flat_map(|f| f.panels()).collect()
}
