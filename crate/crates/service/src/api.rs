//! HTTP routes.

use std::sync::Arc;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Path, Query, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use roundtable_core::autocomplete::suggest;
use roundtable_core::llm::CompletionProvider;
use roundtable_core::pipeline::{AskResponse, Mode, Pipeline};
use roundtable_core::schema::{PromptTemplate, Stopwords};
use roundtable_core::table::{AttributeProfile, DataType};
use roundtable_core::vocab::{create_index, LlmSynonymProvider, NoSynonyms, SynonymDictionary, SynonymProvider};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::registry::{Entry, Registry};

pub const MAX_SUGGESTIONS: usize = 100;

pub struct AppState {
    pub registry: Registry,
    pub provider: Arc<dyn CompletionProvider>,
    pub stopwords: Stopwords,
    pub template: PromptTemplate,
    pub request_timeout: Duration,
}

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    kind: &'static str,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            status,
            kind,
            message: message.into(),
        }
    }

    fn unknown_table(id: &str) -> Self {
        Self::new(StatusCode::NOT_FOUND, "unknown-table", format!("no table with id {id:?}"))
    }

    fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad-request", message)
    }

    fn internal(message: impl Into<String>) -> Self {
        Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({"error": self.kind, "message": self.message}))).into_response()
    }
}

type ApiResult<T> = Result<Json<T>, ApiError>;

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route("/healthz", get(|| async { Json(json!({"status": "ok"})) }))
        .route("/v1/tables", post(upload).get(list))
        .route("/v1/tables/{id}/schema", get(schema))
        .route("/v1/tables/{id}/autocomplete", get(autocomplete))
        .route("/v1/tables/{id}/ask", post(ask))
        .route("/v1/tables/{id}/index/rebuild", post(rebuild))
        .with_state(state)
}

fn entry(state: &AppState, id: &str) -> Result<Entry, ApiError> {
    state.registry.get(id).ok_or_else(|| ApiError::unknown_table(id))
}

#[derive(Serialize)]
pub struct ColumnInfo {
    pub name: String,
    pub normalized_name: String,
    pub dtype: DataType,
    pub profile: AttributeProfile,
    pub indexed_values: usize,
}

#[derive(Serialize)]
pub struct SchemaInfo {
    pub table_id: String,
    pub table_name: String,
    pub row_count: usize,
    pub built_at: u64,
    pub columns: Vec<ColumnInfo>,
    pub synonyms: usize,
}

fn schema_info(id: &str, e: &Entry) -> SchemaInfo {
    SchemaInfo {
        table_id: id.to_string(),
        table_name: e.table.name.clone(),
        row_count: e.table.row_count(),
        built_at: e.built_at,
        columns: e
            .index
            .profiles()
            .iter()
            .map(|p| ColumnInfo {
                name: p.name.clone(),
                normalized_name: p.normalized_name.clone(),
                dtype: p.dtype,
                profile: p.clone(),
                indexed_values: e.index.attribute_values(p.attribute_id).count(),
            })
            .collect(),
        synonyms: e.index.synonyms().len(),
    }
}

#[derive(Deserialize)]
struct UploadParams {
    name: Option<String>,
}

async fn upload(
    State(state): State<Arc<AppState>>,
    Query(params): Query<UploadParams>,
    body: Bytes,
) -> Result<(StatusCode, Json<serde_json::Value>), ApiError> {
    let name = params.name.unwrap_or_else(|| "table".into());
    let st = state.clone();
    let (id, e) = tokio::task::spawn_blocking(move || {
        st.registry.insert_csv(&name, &body, &SynonymDictionary::builtin())
    })
    .await
    .map_err(|e| ApiError::internal(e.to_string()))?
    .map_err(|e| ApiError::bad_request(format!("{e:#}")))?;
    let schema = schema_info(&id, &e);
    Ok((StatusCode::CREATED, Json(json!({"table_id": id, "schema": schema}))))
}

async fn list(State(state): State<Arc<AppState>>) -> Json<serde_json::Value> {
    Json(json!({"tables": state.registry.ids()}))
}

async fn schema(State(state): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<SchemaInfo> {
    let e = entry(&state, &id)?;
    Ok(Json(schema_info(&id, &e)))
}

#[derive(Deserialize)]
struct AutocompleteParams {
    #[serde(default)]
    q: String,
    cursor: Option<usize>,
    k: Option<usize>,
}

async fn autocomplete(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(params): Query<AutocompleteParams>,
) -> Result<Json<serde_json::Value>, ApiError> {
    let e = entry(&state, &id)?;
    let cursor = params.cursor.unwrap_or_else(|| params.q.chars().count());
    let k = params.k.unwrap_or(10).min(MAX_SUGGESTIONS);
    let suggestions = suggest(&e.index, &params.q, cursor, k);
    Ok(Json(json!({"suggestions": suggestions})))
}

#[derive(Deserialize)]
pub struct AskRequest {
    pub question: String,
    #[serde(default)]
    pub execute: bool,
    #[serde(default = "default_mode")]
    pub mode: Mode,
}

fn default_mode() -> Mode {
    Mode::WithFramework
}

async fn ask(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Json(req): Json<AskRequest>,
) -> ApiResult<AskResponse> {
    // the registry lock is released here; the LLM call runs without it
    let e = entry(&state, &id)?;
    let st = state.clone();
    let job = tokio::task::spawn_blocking(move || {
        let pipeline = Pipeline {
            table: &e.table,
            index: &e.index,
            stopwords: &st.stopwords,
            template: &st.template,
            provider: st.provider.as_ref(),
        };
        pipeline.ask(&req.question, req.execute, req.mode)
    });
    match tokio::time::timeout(state.request_timeout, job).await {
        Err(_) => Err(ApiError::new(
            StatusCode::GATEWAY_TIMEOUT,
            "timeout",
            format!("ask did not finish within {:?}", state.request_timeout),
        )),
        Ok(Err(join)) => Err(ApiError::internal(join.to_string())),
        Ok(Ok(Err(e))) => Err(ApiError::bad_request(e.to_string())),
        Ok(Ok(Ok(resp))) => Ok(Json(resp)),
    }
}

#[derive(Deserialize, Default)]
struct RebuildRequest {
    #[serde(default)]
    synonym_provider: Option<String>,
}

async fn rebuild(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Bytes,
) -> Result<Json<serde_json::Value>, ApiError> {
    let req: RebuildRequest = if body.iter().all(u8::is_ascii_whitespace) {
        RebuildRequest::default()
    } else {
        serde_json::from_slice(&body).map_err(|e| ApiError::bad_request(e.to_string()))?
    };
    let source = req.synonym_provider.unwrap_or_else(|| "dictionary".into());
    if !matches!(source.as_str(), "none" | "dictionary" | "llm") {
        return Err(ApiError::bad_request(format!(
            "unknown synonym_provider {source:?} (expected none, dictionary or llm)"
        )));
    }
    let e = entry(&state, &id)?;
    let st = state.clone();
    let src = source.clone();
    let built = tokio::task::spawn_blocking(move || {
        let dictionary = SynonymDictionary::builtin();
        let llm = LlmSynonymProvider::new(st.provider.as_ref());
        let provider: &dyn SynonymProvider = match src.as_str() {
            "none" => &NoSynonyms,
            "llm" => &llm,
            _ => &dictionary,
        };
        create_index(&e.table, st.registry.policy(), provider)
    })
    .await
    .map_err(|e| ApiError::internal(e.to_string()))?
    .map_err(|e| ApiError::new(StatusCode::BAD_GATEWAY, "index-build-failed", e.to_string()))?;
    let values = built.values().len();
    let synonyms = built.synonyms().len();
    let e = state
        .registry
        .replace_index(&id, built)
        .map_err(|e| ApiError::internal(format!("{e:#}")))?
        .ok_or_else(|| ApiError::unknown_table(&id))?;
    Ok(Json(json!({
        "status": "rebuilt",
        "table_id": id,
        "synonym_provider": source,
        "values": values,
        "synonyms": synonyms,
        "built_at": e.built_at,
    })))
}
