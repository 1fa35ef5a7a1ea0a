use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::Arc;

use anyhow::Context;
use clap::Parser;
use mailseal_keyservice::{http, FileStore, KeyService, KeyStore, MemoryStore};

/// Trusted key service for secure mail.
#[derive(Parser)]
#[command(version)]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "MAILSEAL_KEYS_LISTEN", default_value = "127.0.0.1:8081")]
    listen: SocketAddr,
    /// Append-only journal file. Keys are kept in memory only when omitted.
    #[arg(long, env = "MAILSEAL_KEYS_STORAGE")]
    storage: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> anyhow::Result<()> {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env().add_directive("info".parse()?))
        .init();
    let args = Args::parse();

    let store: Arc<dyn KeyStore> = match &args.storage {
        Some(path) => Arc::new(FileStore::open(path).with_context(|| format!("opening {}", path.display()))?),
        None => Arc::new(MemoryStore::new()),
    };
    let app = http::router(KeyService::new(store));
    let listener = tokio::net::TcpListener::bind(args.listen).await?;
    tracing::info!(addr = %listener.local_addr()?, "key service listening");
    axum::serve(listener, app).await?;
    Ok(())
}
