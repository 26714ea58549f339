"""API v1 Router - QSL Verification Workbench."""

from fastapi import APIRouter

from app.api.v1 import workbench

api_router = APIRouter()

# Commands: eval, wp, oracle, laws, case studies
api_router.include_router(workbench.router, tags=["Workbench"])
