//! HTTP-backed providers: an OpenAI-compatible chat and embeddings API and a
//! JSON search endpoint. Configured entirely from environment variables.

use std::collections::BTreeMap;
use std::time::Duration;

use kgatlas_core::ingest::providers::{Embedder, LanguageModel, ProviderFailure, SearchEngine};
use kgatlas_core::ingest::{ProductQuery, WebPage};
use reqwest::blocking::Client;
use serde_json::{json, Value};

pub const ENV_LLM_URL: &str = "KGATLAS_LLM_URL";
pub const ENV_LLM_API_KEY: &str = "KGATLAS_LLM_API_KEY";
pub const ENV_LLM_MODEL: &str = "KGATLAS_LLM_MODEL";
pub const ENV_EMBED_URL: &str = "KGATLAS_EMBED_URL";
pub const ENV_EMBED_API_KEY: &str = "KGATLAS_EMBED_API_KEY";
pub const ENV_EMBED_MODEL: &str = "KGATLAS_EMBED_MODEL";
pub const ENV_SEARCH_URL: &str = "KGATLAS_SEARCH_URL";
pub const ENV_SEARCH_API_KEY: &str = "KGATLAS_SEARCH_API_KEY";

const KEYWORD_PROMPT: &str =
    "Extract between 5 and 7 web search keywords for finding this product. \
Answer with a JSON array of strings only, most important first.";

const EXTRACT_PROMPT: &str = "Extract the product described on this web page. Answer with one JSON object \
with the string fields name, product_type, brand, model, price, description and an object spec_params \
mapping parameter names to values. Omit fields you cannot find. If the page describes no product, answer \
NO_PRODUCT_FOUND.";

const CLASSIFY_PROMPT: &str = "From these product specification parameters keep only the core ones that \
determine what the product can do, such as processor, memory, storage, ports, resolution, power and capacity. \
Answer with a JSON object of the kept parameters only.";

fn client(timeout: Duration) -> Result<Client, ProviderFailure> {
    Client::builder()
        .timeout(timeout)
        .build()
        .map_err(|e| ProviderFailure::new(e.to_string()))
}

fn required(env: &impl Fn(&str) -> Option<String>, var: &str) -> Result<String, ProviderFailure> {
    env(var)
        .filter(|v| !v.is_empty())
        .ok_or_else(|| ProviderFailure::new(format!("{var} is not set")))
}

fn post_json(
    client: &Client,
    url: &str,
    key: Option<&str>,
    body: &Value,
) -> Result<Value, ProviderFailure> {
    let mut req = client.post(url).json(body);
    if let Some(k) = key {
        req = req.bearer_auth(k);
    }
    let resp = req
        .send()
        .map_err(|e| ProviderFailure::new(e.to_string()))?;
    let status = resp.status();
    let text = resp
        .text()
        .map_err(|e| ProviderFailure::new(e.to_string()))?;
    if !status.is_success() {
        return Err(ProviderFailure::new(format!(
            "{url} returned {status}: {text}"
        )));
    }
    serde_json::from_str(&text)
        .map_err(|e| ProviderFailure::new(format!("bad JSON from {url}: {e}")))
}

/// `choices[0].message.content` of a chat completion.
pub fn chat_content(resp: &Value) -> Result<String, ProviderFailure> {
    resp["choices"][0]["message"]["content"]
        .as_str()
        .map(str::to_string)
        .ok_or_else(|| ProviderFailure::new("chat response has no message content"))
}

/// `data[0].embedding` of an embeddings response.
pub fn embedding(resp: &Value) -> Result<Vec<f64>, ProviderFailure> {
    resp["data"][0]["embedding"]
        .as_array()
        .and_then(|a| a.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
        .filter(|v| !v.is_empty())
        .ok_or_else(|| ProviderFailure::new("embedding response has no vector"))
}

/// Drops a Markdown code fence around a model answer.
pub fn unfence(text: &str) -> &str {
    let t = text.trim();
    let Some(rest) = t.strip_prefix("```") else {
        return t;
    };
    let rest = rest.split_once('\n').map_or("", |(_, body)| body);
    rest.strip_suffix("```").unwrap_or(rest).trim()
}

pub fn keyword_list(text: &str) -> Result<Vec<String>, ProviderFailure> {
    serde_json::from_str(unfence(text))
        .map_err(|e| ProviderFailure::new(format!("keywords are not a JSON string array: {e}")))
}

pub fn param_map(text: &str) -> Result<BTreeMap<String, String>, ProviderFailure> {
    let v: BTreeMap<String, Value> = serde_json::from_str(unfence(text))
        .map_err(|e| ProviderFailure::new(format!("parameters are not a JSON object: {e}")))?;
    Ok(v.into_iter()
        .map(|(k, v)| match v {
            Value::String(s) => (k, s),
            other => (k, other.to_string()),
        })
        .collect())
}

/// Accepts a bare array of pages or `{"results": [...]}`; `snippet` stands
/// in for a missing `content`.
pub fn search_results(resp: &Value) -> Result<Vec<WebPage>, ProviderFailure> {
    let items = resp
        .as_array()
        .or_else(|| resp["results"].as_array())
        .ok_or_else(|| ProviderFailure::new("search response has no result list"))?;
    Ok(items
        .iter()
        .filter_map(|it| {
            let url = it["url"].as_str()?;
            let content = it["content"].as_str().or_else(|| it["snippet"].as_str())?;
            Some(WebPage {
                url: url.to_string(),
                title: it["title"].as_str().unwrap_or_default().to_string(),
                content: content.to_string(),
            })
        })
        .collect())
}

pub struct ChatModel {
    client: Client,
    url: String,
    key: Option<String>,
    model: String,
}

impl ChatModel {
    pub fn from_env(
        env: impl Fn(&str) -> Option<String>,
        timeout: Duration,
    ) -> Result<Self, ProviderFailure> {
        let base = required(&env, ENV_LLM_URL)?;
        Ok(ChatModel {
            client: client(timeout)?,
            url: format!("{}/chat/completions", base.trim_end_matches('/')),
            key: env(ENV_LLM_API_KEY),
            model: required(&env, ENV_LLM_MODEL)?,
        })
    }

    fn ask(&self, system: &str, user: &str) -> Result<String, ProviderFailure> {
        let body = json!({
            "model": self.model,
            "temperature": 0,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
        });
        chat_content(&post_json(
            &self.client,
            &self.url,
            self.key.as_deref(),
            &body,
        )?)
    }
}

impl LanguageModel for ChatModel {
    fn model_id(&self) -> String {
        self.model.clone()
    }

    fn extract_keywords(&self, query: &ProductQuery) -> Result<Vec<String>, ProviderFailure> {
        let user = serde_json::to_string(query).expect("query serializes");
        keyword_list(&self.ask(KEYWORD_PROMPT, &user)?)
    }

    fn extract_product(&self, page: &WebPage) -> Result<String, ProviderFailure> {
        let user = format!(
            "URL: {}\nTitle: {}\n\n{}",
            page.url, page.title, page.content
        );
        Ok(unfence(&self.ask(EXTRACT_PROMPT, &user)?).to_string())
    }

    fn classify_params(
        &self,
        params: &BTreeMap<String, String>,
    ) -> Result<BTreeMap<String, String>, ProviderFailure> {
        let user = serde_json::to_string(params).expect("map serializes");
        let kept = param_map(&self.ask(CLASSIFY_PROMPT, &user)?)?;
        Ok(kept
            .into_iter()
            .filter(|(k, _)| params.contains_key(k))
            .collect())
    }

    fn introduce(&self, prompt: &str) -> Result<String, ProviderFailure> {
        let body = json!({
            "model": self.model,
            "messages": [{"role": "user", "content": prompt}],
        });
        chat_content(&post_json(
            &self.client,
            &self.url,
            self.key.as_deref(),
            &body,
        )?)
    }
}

pub struct HttpEmbedder {
    client: Client,
    url: String,
    key: Option<String>,
    model: String,
}

impl HttpEmbedder {
    /// Falls back to the chat endpoint's base url and key.
    pub fn from_env(
        env: impl Fn(&str) -> Option<String>,
        timeout: Duration,
    ) -> Result<Self, ProviderFailure> {
        let base = env(ENV_EMBED_URL)
            .filter(|v| !v.is_empty())
            .map_or_else(|| required(&env, ENV_LLM_URL), Ok)?;
        Ok(HttpEmbedder {
            client: client(timeout)?,
            url: format!("{}/embeddings", base.trim_end_matches('/')),
            key: env(ENV_EMBED_API_KEY).or_else(|| env(ENV_LLM_API_KEY)),
            model: required(&env, ENV_EMBED_MODEL)?,
        })
    }
}

impl Embedder for HttpEmbedder {
    fn embed(&self, text: &str) -> Result<Vec<f64>, ProviderFailure> {
        let body = json!({"model": self.model, "input": text});
        embedding(&post_json(
            &self.client,
            &self.url,
            self.key.as_deref(),
            &body,
        )?)
    }
}

pub struct HttpSearch {
    client: Client,
    url: String,
    key: Option<String>,
}

impl HttpSearch {
    pub fn from_env(
        env: impl Fn(&str) -> Option<String>,
        timeout: Duration,
    ) -> Result<Self, ProviderFailure> {
        Ok(HttpSearch {
            client: client(timeout)?,
            url: required(&env, ENV_SEARCH_URL)?,
            key: env(ENV_SEARCH_API_KEY),
        })
    }
}

impl SearchEngine for HttpSearch {
    fn search(&self, keywords: &[String]) -> Result<Vec<WebPage>, ProviderFailure> {
        let mut req = self
            .client
            .get(&self.url)
            .query(&[("q", keywords.join(" "))]);
        if let Some(k) = &self.key {
            req = req.bearer_auth(k);
        }
        let resp = req
            .send()
            .map_err(|e| ProviderFailure::new(e.to_string()))?;
        let status = resp.status();
        if !status.is_success() {
            return Err(ProviderFailure::new(format!("search returned {status}")));
        }
        let v: Value = resp
            .json()
            .map_err(|e| ProviderFailure::new(e.to_string()))?;
        search_results(&v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn response_shapes() {
        let chat = json!({"choices": [{"message": {"role": "assistant", "content": "hi"}}]});
        assert_eq!(chat_content(&chat).unwrap(), "hi");
        assert!(chat_content(&json!({"choices": []})).is_err());

        let emb = json!({"data": [{"embedding": [0.5, -1, 2]}]});
        assert_eq!(embedding(&emb).unwrap(), [0.5, -1.0, 2.0]);
        assert!(embedding(&json!({"data": [{"embedding": []}]})).is_err());
        assert!(embedding(&json!({"data": [{"embedding": ["x"]}]})).is_err());
    }

    #[test]
    fn fenced_answers() {
        assert_eq!(unfence("```json\n[\"a\"]\n```"), "[\"a\"]");
        assert_eq!(unfence("  [1] "), "[1]");
        assert_eq!(
            keyword_list("```\n[\"server\",\"kunpeng\"]\n```").unwrap(),
            ["server", "kunpeng"]
        );
        assert!(keyword_list("server, kunpeng").is_err());
        let m = param_map(r#"{"cpu": "Kunpeng 920", "cores": 64}"#).unwrap();
        assert_eq!(m["cores"], "64");
    }

    #[test]
    fn search_shapes() {
        let bare = json!([{"url": "u1", "title": "t", "content": "c"}, {"title": "no url"}]);
        assert_eq!(search_results(&bare).unwrap().len(), 1);
        let wrapped = json!({"results": [{"url": "u2", "snippet": "s"}]});
        let pages = search_results(&wrapped).unwrap();
        assert_eq!(
            (pages[0].url.as_str(), pages[0].content.as_str()),
            ("u2", "s")
        );
        assert!(search_results(&json!({"items": []})).is_err());
    }

    #[test]
    fn missing_env_is_reported() {
        let none = |_: &str| None;
        let err = ChatModel::from_env(none, Duration::from_secs(1))
            .err()
            .unwrap();
        assert!(err.0.contains(ENV_LLM_URL));
        let partial = |k: &str| (k == ENV_LLM_URL).then(|| "http://localhost:1".to_string());
        let err = HttpEmbedder::from_env(partial, Duration::from_secs(1))
            .err()
            .unwrap();
        assert!(err.0.contains(ENV_EMBED_MODEL));
        assert!(HttpSearch::from_env(none, Duration::from_secs(1)).is_err());
    }
}
