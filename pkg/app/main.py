"""QSL Verification Workbench - HTTP application."""

import logging

from fastapi import FastAPI

from app.api.v1.router import api_router
from app.config import get_settings
from app.domain.casestudies import CASE_STUDIES
from app.services.commands import COMMANDS

settings = get_settings()

logging.basicConfig(
    level=getattr(logging, settings.log_level.upper(), logging.INFO),
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
)

app = FastAPI(
    title=settings.api_title,
    description=(
        "Exhaustive bounded checking for quantitative separation logic\n\n"
        "- **eval / wp**: expectations and the eight weakest-preexpectation calculi\n"
        "- **oracle**: expected rewards of the operational MDP\n"
        "- **laws / casestudy**: randomized law suite and bounded case studies\n"
    ),
    version=settings.api_version,
    debug=settings.debug,
)

app.include_router(api_router, prefix="/api/v1")


@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy", "version": settings.api_version}


@app.get("/")
async def root():
    """Root endpoint with API info."""
    return {
        "name": settings.api_title,
        "version": settings.api_version,
        "docs": "/docs",
        "commands": list(COMMANDS),
        "casestudies": sorted(CASE_STUDIES),
        "endpoints": {
            "command": "/api/v1/command",
            "eval": "/api/v1/eval",
            "wp": "/api/v1/wp",
            "oracle": "/api/v1/oracle",
            "laws": "/api/v1/laws",
            "casestudy": "/api/v1/casestudy/{name}",
        },
    }
