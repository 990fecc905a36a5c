function e(e){const t=[];let a=0;for(;a<e.length;){const s=e[a];if(/\s/.test(s))a++;else{if(/[0-9]/.test(s)){let s="";for(;a<e.length&&/[0-9.]/.test(e[a]);)s+=e[a++];t.push({kind:"number",value:parseFloat(s)});continue}switch(s){case"+":case"-":case"*":case"/":t.push({kind:"operator",value:s});break;case"(":case")":t.push({kind:"paren",value:s});break;default:throw new SyntaxError("unexpected "+s+" at "+a)}a++}}return t}
