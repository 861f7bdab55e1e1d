//! Stateless HTTP service: layout, check and drag.
//!
//! | route             | body                                   | success            |
//! |-------------------|----------------------------------------|--------------------|
//! | `POST /api/layout`| [`LayoutRequest`]                      | 200 Diagram JSON   |
//! | `POST /api/check` | [`CheckRequest`]                       | 200 `{"ok":true}`  |
//! | `POST /api/drag`  | [`DragRequest`]                        | 200 Diagram JSON   |
//! | `GET /healthz`    |                                        | 200 `ok`           |
//!
//! Malformed bodies get 400, unknown drag targets 404, and any layout error
//! 422 with an [`ErrorPayload`].

use std::collections::BTreeMap;
use std::net::SocketAddr;

use axum::body::Bytes;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use tower_http::cors::CorsLayer;

use crate::error::{InputError, LayoutError, Provenance};
use crate::instance::Instance;
use crate::params::LayoutParams;
use crate::pipeline::{self, Pins};
use crate::render::Diagram;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayoutRequest {
    pub instance: serde_json::Value,
    pub spec: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub pinned: BTreeMap<String, Point>,
    #[serde(default)]
    pub params: Option<LayoutParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DragRequest {
    pub request: LayoutRequest,
    pub node: String,
    pub proposed: Point,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckRequest {
    pub spec: String,
    #[serde(default)]
    pub instance: Option<serde_json::Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPayload {
    pub kind: String,
    pub message: String,
    pub constraints: Vec<Provenance>,
    pub atoms: Vec<String>,
}

impl From<&LayoutError> for ErrorPayload {
    fn from(err: &LayoutError) -> Self {
        let (constraints, atoms) = match err {
            LayoutError::Unsat(u) => {
                let mut cs = vec![u.failing.clone()];
                cs.extend(u.context.iter().cloned());
                (cs, u.failing.atoms.clone())
            }
            LayoutError::GroupOverlap(g) => (Vec::new(), g.shared.clone()),
            _ => (Vec::new(), Vec::new()),
        };
        ErrorPayload {
            kind: err.kind().to_string(),
            message: err.to_string(),
            constraints,
            atoms,
        }
    }
}

/// A status code and JSON (or plain text) body.
#[derive(Debug, Clone, PartialEq)]
pub struct Reply {
    pub status: StatusCode,
    pub body: String,
}

impl Reply {
    fn json(status: StatusCode, body: String) -> Reply {
        Reply { status, body }
    }

    fn error(status: StatusCode, err: &LayoutError) -> Reply {
        let body = serde_json::to_string(&ErrorPayload::from(err)).expect("payload serializes");
        Reply { status, body }
    }

    fn bad_request(message: String) -> Reply {
        Self::error(StatusCode::BAD_REQUEST, &InputError::new(message).into())
    }
}

impl IntoResponse for Reply {
    fn into_response(self) -> Response {
        let kind = if self.body.starts_with('{') {
            "application/json"
        } else {
            "text/plain; charset=utf-8"
        };
        (self.status, [(header::CONTENT_TYPE, kind)], self.body).into_response()
    }
}

fn decode<T: DeserializeOwned>(body: &[u8]) -> Result<T, Reply> {
    let de = &mut serde_json::Deserializer::from_slice(body);
    serde_path_to_error::deserialize(de)
        .map_err(|e| Reply::bad_request(format!("malformed request at `{}`: {}", e.path(), e.inner())))
}

fn prepare(req: &LayoutRequest) -> Result<(Instance, LayoutParams, Pins), LayoutError> {
    let instance = Instance::parse(&req.instance.to_string())?;
    let mut params = req.params.clone().unwrap_or_default();
    if let Some(seed) = req.seed {
        params.seed = seed;
    }
    let mut pins = Pins::new();
    for (id, p) in &req.pinned {
        if instance.atom(id).is_none() {
            return Err(InputError::new(format!("pinned atom `{id}` is not in the instance")).into());
        }
        pins.insert(id.clone(), (p.x, p.y));
    }
    Ok((instance, params, pins))
}

fn run_request(req: &LayoutRequest, extra_pin: Option<(&str, Point)>) -> Result<Diagram, LayoutError> {
    let (instance, params, mut pins) = prepare(req)?;
    if let Some((id, p)) = extra_pin {
        pins.insert(id.to_string(), (p.x, p.y));
    }
    pipeline::run(&instance, &req.spec, &params, &pins)
}

fn diagram_reply(result: Result<Diagram, LayoutError>) -> Reply {
    match result {
        Ok(d) => Reply::json(StatusCode::OK, d.to_json()),
        Err(e) => Reply::error(StatusCode::UNPROCESSABLE_ENTITY, &e),
    }
}

pub fn handle_layout(body: &[u8]) -> Reply {
    match decode::<LayoutRequest>(body) {
        Ok(req) => diagram_reply(run_request(&req, None)),
        Err(r) => r,
    }
}

/// Lay out the request with `node` pinned at the proposed point. Nodes that
/// are not in the instance, or are hidden from the diagram, are not found.
pub fn handle_drag(body: &[u8]) -> Reply {
    let req = match decode::<DragRequest>(body) {
        Ok(req) => req,
        Err(r) => return r,
    };
    let not_found = || {
        Reply::error(
            StatusCode::NOT_FOUND,
            &InputError::new(format!("no node `{}` to drag", req.node)).into(),
        )
    };
    if let Ok(instance) = Instance::parse(&req.request.instance.to_string()) {
        if instance.atom(&req.node).is_none() {
            return not_found();
        }
    }
    match run_request(&req.request, Some((&req.node, req.proposed))) {
        Ok(d) if d.node(&req.node).is_none() => not_found(),
        result => diagram_reply(result),
    }
}

pub fn handle_check(body: &[u8]) -> Reply {
    let req = match decode::<CheckRequest>(body) {
        Ok(req) => req,
        Err(r) => return r,
    };
    let result = req
        .instance
        .as_ref()
        .map(|v| Instance::parse(&v.to_string()))
        .transpose()
        .map_err(LayoutError::from)
        .and_then(|inst| pipeline::check(&req.spec, inst.as_ref(), &LayoutParams::default()));
    match result {
        Ok(()) => Reply::json(StatusCode::OK, r#"{"ok":true}"#.to_string()),
        Err(e) => Reply::error(StatusCode::UNPROCESSABLE_ENTITY, &e),
    }
}

async fn blocking(f: fn(&[u8]) -> Reply, body: Bytes) -> Reply {
    tokio::task::spawn_blocking(move || f(&body))
        .await
        .unwrap_or_else(|e| Reply {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: format!("internal error: {e}"),
        })
}

pub fn router() -> Router {
    Router::new()
        .route("/healthz", get(|| async { "ok" }))
        .route("/api/layout", post(|body: Bytes| blocking(handle_layout, body)))
        .route("/api/drag", post(|body: Bytes| blocking(handle_drag, body)))
        .route("/api/check", post(|body: Bytes| blocking(handle_check, body)))
        .layer(CorsLayer::permissive())
}

pub async fn serve(addr: SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    axum::serve(listener, router()).await
}
