//! Directives: attribute labels, sig colors, icons and projection.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{CompileError, InputError, LayoutError};
use crate::instance::Instance;
use crate::params::LayoutParams;
use crate::spec::{CndSpec, Directive};

/// Default sig colors, assigned by sig ordinal modulo the palette length.
pub const PALETTE: [&str; 20] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
    "#9c755f", "#bab0ac", "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

/// Label line height and padding used to size nodes.
pub const LINE_HEIGHT: f64 = 14.0;
const CHAR_WIDTH: f64 = 7.0;
const TEXT_PAD: f64 = 16.0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Icon {
    pub path: String,
    pub width: u32,
    pub height: u32,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Style {
    pub labels: BTreeMap<String, Vec<String>>,
    pub colors: BTreeMap<String, String>,
    pub icons: BTreeMap<String, Icon>,
    /// Atoms removed by projection.
    pub hidden: BTreeSet<String>,
    /// Fields drawn as labels instead of edges.
    pub suppressed_fields: BTreeSet<String>,
}

impl Style {
    pub fn apply(spec: &CndSpec, instance: &Instance) -> Result<Style, LayoutError> {
        let (labels, suppressed_fields) = apply_attributes(spec, instance)?;
        Ok(Style {
            labels,
            suppressed_fields,
            colors: apply_colors(spec, instance)?,
            icons: apply_icons(spec, instance)?,
            hidden: apply_projection(spec, instance)?,
        })
    }

    /// Drawn size of a node: room for its icon and label lines, never
    /// smaller than the configured node size.
    pub fn node_size(&self, atom: &str, params: &LayoutParams) -> (f64, f64) {
        let fallback = [atom.to_string()];
        let lines = self
            .labels
            .get(atom)
            .map(|l| l.as_slice())
            .unwrap_or(&fallback);
        let widest = lines.iter().map(|l| l.chars().count()).max().unwrap_or(0);
        let mut w = widest as f64 * CHAR_WIDTH + TEXT_PAD;
        let mut h = lines.len() as f64 * LINE_HEIGHT + TEXT_PAD;
        if let Some(icon) = self.icons.get(atom) {
            w = w.max(icon.width as f64 + TEXT_PAD);
            h += icon.height as f64;
        }
        (w.max(params.node_size), h.max(params.node_size))
    }
}

fn binary_field<'a>(
    instance: &'a Instance,
    name: &str,
    line: usize,
) -> Result<&'a crate::instance::Field, CompileError> {
    let field = instance.field(name).ok_or_else(|| CompileError::UnknownField {
        field: name.to_string(),
        line,
    })?;
    if !field.is_binary() {
        return Err(CompileError::NotBinary {
            field: name.to_string(),
            arity: field.arity,
            line,
        });
    }
    Ok(field)
}

fn known_sig(instance: &Instance, sig: &str, line: usize) -> Result<(), CompileError> {
    if instance.sig(sig).is_none() {
        return Err(CompileError::UnknownSig {
            sig: sig.to_string(),
            line,
        });
    }
    Ok(())
}

/// Labels start as the atom id; each attribute tuple `(a, b)` of field `f`
/// appends `f: b` to `a`. Attribute fields are returned for edge suppression.
pub fn apply_attributes(
    spec: &CndSpec,
    instance: &Instance,
) -> Result<(BTreeMap<String, Vec<String>>, BTreeSet<String>), CompileError> {
    let mut labels: BTreeMap<String, Vec<String>> = instance
        .atoms()
        .iter()
        .map(|a| (a.id.clone(), vec![a.id.clone()]))
        .collect();
    let mut suppressed = BTreeSet::new();
    for d in &spec.directives {
        let Directive::Attribute { field } = &d.item else {
            continue;
        };
        let f = binary_field(instance, field, d.line)?;
        if !suppressed.insert(field.clone()) {
            continue;
        }
        for t in &f.tuples {
            labels
                .get_mut(&t[0])
                .expect("validated instance")
                .push(format!("{}: {}", field, t[1]));
        }
    }
    Ok((labels, suppressed))
}

/// Explicit sig colors win (the nearest sig in an atom's lineage, last
/// directive for a sig); otherwise the palette entry for the atom's sig.
pub fn apply_colors(spec: &CndSpec, instance: &Instance) -> Result<BTreeMap<String, String>, LayoutError> {
    let mut explicit: BTreeMap<&str, &str> = BTreeMap::new();
    for d in &spec.directives {
        let Directive::SigColor { sig, color } = &d.item else {
            continue;
        };
        known_sig(instance, sig, d.line)?;
        if !is_css_color(color) {
            return Err(InputError::new(format!(
                "Invalid color `{color}` for sig {sig} on line {}.",
                d.line
            ))
            .into());
        }
        explicit.insert(sig, color);
    }
    Ok(instance
        .atoms()
        .iter()
        .map(|a| {
            let color = instance
                .lineage(&a.sig)
                .find_map(|s| explicit.get(s.name.as_str()).copied())
                .map(str::to_string)
                .unwrap_or_else(|| {
                    let ordinal = instance.sig_ordinal(&a.sig).expect("validated instance");
                    PALETTE[ordinal % PALETTE.len()].to_string()
                });
            (a.id.clone(), color)
        })
        .collect())
}

/// Icons attach to atoms whose sig, or nearest ancestor, has an icon directive.
pub fn apply_icons(spec: &CndSpec, instance: &Instance) -> Result<BTreeMap<String, Icon>, LayoutError> {
    let mut by_sig: BTreeMap<&str, Icon> = BTreeMap::new();
    for d in &spec.directives {
        let Directive::Icon {
            sig,
            path,
            height,
            width,
        } = &d.item
        else {
            continue;
        };
        known_sig(instance, sig, d.line)?;
        if path.contains("://") {
            return Err(InputError::new(format!(
                "Icon path `{path}` on line {} is not a local file.",
                d.line
            ))
            .into());
        }
        by_sig.insert(
            sig,
            Icon {
                path: path.clone(),
                width: *width,
                height: *height,
            },
        );
    }
    let mut icons = BTreeMap::new();
    for a in instance.atoms() {
        if let Some(icon) = instance
            .lineage(&a.sig)
            .find_map(|s| by_sig.get(s.name.as_str()))
        {
            icons.insert(a.id.clone(), icon.clone());
        }
    }
    Ok(icons)
}

/// Projection keeps atoms of the projected sigs and the atoms sharing a tuple
/// with them; everything else is hidden. No projection hides nothing.
pub fn apply_projection(spec: &CndSpec, instance: &Instance) -> Result<BTreeSet<String>, CompileError> {
    let mut projected = Vec::new();
    for d in &spec.directives {
        if let Directive::Projection { sig } = &d.item {
            known_sig(instance, sig, d.line)?;
            projected.push(sig.as_str());
        }
    }
    if projected.is_empty() {
        return Ok(BTreeSet::new());
    }
    let mut keep: BTreeSet<&str> = instance
        .atoms()
        .iter()
        .filter(|a| projected.iter().any(|p| instance.is_subsig(&a.sig, p)))
        .map(|a| a.id.as_str())
        .collect();
    let core = keep.clone();
    for t in instance.fields().iter().flat_map(|f| &f.tuples) {
        if t.iter().any(|a| core.contains(a.as_str())) {
            keep.extend(t.iter().map(String::as_str));
        }
    }
    Ok(instance
        .atoms()
        .iter()
        .filter(|a| !keep.contains(a.id.as_str()))
        .map(|a| a.id.clone())
        .collect())
}

const NAMED_COLORS: [&str; 149] = [
    "aliceblue", "antiquewhite", "aqua", "aquamarine", "azure", "beige", "bisque", "black",
    "blanchedalmond", "blue", "blueviolet", "brown", "burlywood", "cadetblue", "chartreuse",
    "chocolate", "coral", "cornflowerblue", "cornsilk", "crimson", "cyan", "darkblue", "darkcyan",
    "darkgoldenrod", "darkgray", "darkgreen", "darkgrey", "darkkhaki", "darkmagenta",
    "darkolivegreen", "darkorange", "darkorchid", "darkred", "darksalmon", "darkseagreen",
    "darkslateblue", "darkslategray", "darkslategrey", "darkturquoise", "darkviolet", "deeppink",
    "deepskyblue", "dimgray", "dimgrey", "dodgerblue", "firebrick", "floralwhite", "forestgreen",
    "fuchsia", "gainsboro", "ghostwhite", "gold", "goldenrod", "gray", "green", "greenyellow",
    "grey", "honeydew", "hotpink", "indianred", "indigo", "ivory", "khaki", "lavender",
    "lavenderblush", "lawngreen", "lemonchiffon", "lightblue", "lightcoral", "lightcyan",
    "lightgoldenrodyellow", "lightgray", "lightgreen", "lightgrey", "lightpink", "lightsalmon",
    "lightseagreen", "lightskyblue", "lightslategray", "lightslategrey", "lightsteelblue",
    "lightyellow", "lime", "limegreen", "linen", "magenta", "maroon", "mediumaquamarine",
    "mediumblue", "mediumorchid", "mediumpurple", "mediumseagreen", "mediumslateblue",
    "mediumspringgreen", "mediumturquoise", "mediumvioletred", "midnightblue", "mintcream",
    "mistyrose", "moccasin", "navajowhite", "navy", "oldlace", "olive", "olivedrab", "orange",
    "orangered", "orchid", "palegoldenrod", "palegreen", "paleturquoise", "palevioletred",
    "papayawhip", "peachpuff", "peru", "pink", "plum", "powderblue", "purple", "rebeccapurple",
    "red", "rosybrown", "royalblue", "saddlebrown", "salmon", "sandybrown", "seagreen",
    "seashell", "sienna", "silver", "skyblue", "slateblue", "slategray", "slategrey", "snow",
    "springgreen", "steelblue", "tan", "teal", "thistle", "tomato", "turquoise", "violet",
    "wheat", "white", "whitesmoke", "yellow", "yellowgreen", "transparent",
];

/// Accepts CSS named colors, hex forms and `rgb[a]()` / `hsl[a]()` with
/// numeric arguments.
pub fn is_css_color(s: &str) -> bool {
    let s = s.trim();
    let lower = s.to_ascii_lowercase();
    if NAMED_COLORS.contains(&lower.as_str()) {
        return true;
    }
    if let Some(hex) = lower.strip_prefix('#') {
        return matches!(hex.len(), 3 | 4 | 6 | 8) && hex.chars().all(|c| c.is_ascii_hexdigit());
    }
    let Some(open) = lower.find('(') else {
        return false;
    };
    let name = &lower[..open];
    if !matches!(name, "rgb" | "rgba" | "hsl" | "hsla") || !lower.ends_with(')') {
        return false;
    }
    let inner = &lower[open + 1..lower.len() - 1];
    let args: Vec<&str> = inner
        .split(|c: char| c == ',' || c == '/' || c.is_whitespace())
        .filter(|a| !a.is_empty())
        .collect();
    if !(args.len() == 3 || args.len() == 4) {
        return false;
    }
    args.iter().enumerate().all(|(i, a)| {
        let a = if i == 0 && name.starts_with("hsl") {
            a.trim_end_matches("deg")
        } else {
            a.trim_end_matches('%')
        };
        a.parse::<f64>().map_or(false, f64::is_finite)
    })
}
