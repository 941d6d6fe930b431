use clap::ValueEnum;
use serde::Serialize;

/// Parameter sets of the five figures. Unset fields are the swept variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct Values {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
}

impl Preset {
    pub fn values(self) -> Values {
        match self {
            Preset::Fig1 => Values {
                q: Some(0.75),
                a: Some(1.4),
                b: Some(1.2),
                x: Some(0.5),
                ..Values::default()
            },
            Preset::Fig2 => Values {
                p: Some(0.5),
                q: Some(0.75),
                a: Some(1.2),
                b: Some(1.3),
                ..Values::default()
            },
            Preset::Fig3 => Values {
                q: Some(0.75),
                a: Some(1.5),
                b: Some(1.2),
                x: Some(0.5),
                ..Values::default()
            },
            Preset::Fig4 => Values {
                q: Some(0.75),
                a: Some(1.6),
                b: Some(1.2),
                x: Some(0.5),
                ..Values::default()
            },
            Preset::Fig5 => Values {
                p: Some(0.5),
                q: Some(0.75),
                a: Some(1.4),
                b: Some(1.8),
                ..Values::default()
            },
        }
    }
}
